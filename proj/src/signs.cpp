#include "heegner/signs.hpp"

#include <stdexcept>

namespace heegner {

int eta_minus_one(const QuadOrder& k, std::int64_t p) { return hilbert_symbol(-1, k.disc, p); }

namespace {

std::int64_t val_at(std::int64_t n, std::int64_t p) {
    std::int64_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

SignValue steinberg_epsilon(std::int64_t p, const LocalRepType& rep, SplittingType s, std::int64_t m,
                            const EpsilonExtras& extras) {
    // The sign is -1 exactly when chi_p^{-1} = psi o Nr. The conductor of
    // psi o Nr is 0 for unramified psi and equals the twist conductor when
    // K_p is unramified; for ramified K_p it depends on the field of psi and
    // is not determined by conductors alone.
    (void)p;
    std::optional<std::int64_t> norm_conductor;
    if (rep.steinberg_twist == 0)
        norm_conductor = 0;
    else if (s == SplittingType::Inert)
        norm_conductor = rep.steinberg_twist;
    if (norm_conductor && m != *norm_conductor) {
        if (extras.steinberg_norm_relation && *extras.steinberg_norm_relation)
            throw std::invalid_argument(
                "steinberg norm relation asserted but chi and psi o Nr have different conductors");
        return SignValue::plus();
    }
    if (extras.steinberg_norm_relation)
        return *extras.steinberg_norm_relation ? SignValue::minus() : SignValue::plus();
    return SignValue::undetermined("Steinberg sign needs the chi vs psi-o-norm relation, not just conductors");
}

}  // namespace

SignValue local_epsilon(std::int64_t p, const LocalRepType& rep, SplittingType s, std::int64_t m,
                        const EpsilonExtras& extras) {
    if (s == SplittingType::Split)
        throw std::invalid_argument("local_epsilon: split primes carry the trivial comparison; not evaluated");
    if (m < 0) throw std::invalid_argument("local_epsilon: m must be >= 0");
    validate_rep(p, rep);

    if (rep.kind == RepKind::Steinberg) return steinberg_epsilon(p, rep, s, m, extras);

    if (rep.kind == RepKind::Supercuspidal) {
        if (rep.exceptional) {
            // R6: p = 2, n = 7, minimal exceptional type
            if (rep.minimal && s == SplittingType::Inert)
                return m >= 4 ? SignValue::plus() : SignValue::minus();
            return SignValue::undetermined(
                "exceptional supercuspidal sign known only in the minimal inert case");
        }
        if (s == SplittingType::Inert && p != 2 && rep.n >= 3 && is_ramified_class(rep.inducing)) {
            // R3: induced from a ramified field over an inert prime
            return m <= (std::int64_t)(rep.n - 1) / 2 ? SignValue::minus() : SignValue::plus();
        }
        if (p == 2 && rep.n == 3 && s == SplittingType::Inert)  // R5
            return m >= 2 ? SignValue::plus() : SignValue::minus();
        if (p == 2 && rep.n == 5 && s == SplittingType::Inert && is_ramified_class(rep.inducing) &&
            m <= 2)  // character conductor below the inducing one forces the minus sign
            return SignValue::minus();
        if (rep.n == 2 && s == SplittingType::Inert && m >= 2) return SignValue::plus();  // R7
        if (rep.n == 2 && s == SplittingType::Ramified && p != 2 && m == 1)
            return SignValue::plus();  // R4
        if (p == 3 && rep.n == 4 && m == 1) return SignValue::plus();  // unramified-induced n = 4
    }

    // R1: unramified chi over an inert prime, even conductor exponent (the
    // odd exponents carry the minus sign through the rules above)
    if (m == 0 && s == SplittingType::Inert && rep.n % 2 == 0) return SignValue::plus();

    if (rep.kind == RepKind::PrincipalSeries)
        return SignValue::undetermined(
            "principal series is not square-integrable; membership handled structurally");
    return SignValue::undetermined("no conductor-level rule for this supercuspidal configuration");
}

bool SigmaReport::fully_determined() const {
    for (auto& e : primes)
        if (!e.in_sigma) return false;
    return true;
}

std::vector<std::int64_t> SigmaReport::finite_sigma() const {
    std::vector<std::int64_t> v;
    for (auto& e : primes)
        if (e.in_sigma && *e.in_sigma) v.push_back(e.p);
    return v;
}

bool SigmaReport::contains(std::int64_t p) const {
    for (auto& e : primes)
        if (e.p == p) return e.in_sigma && *e.in_sigma;
    return false;
}

SigmaReport build_sigma(const std::vector<std::pair<std::int64_t, unsigned>>& n_factored,
                        const std::map<std::int64_t, LocalRepType>& reps, const QuadOrder& k, std::int64_t c,
                        const std::map<std::int64_t, bool>& overrides,
                        const std::map<std::int64_t, EpsilonExtras>& extras) {
    SigmaReport report;
    for (auto& [p, ov] : overrides) {
        bool divides = false;
        for (auto& [q, e] : n_factored) divides |= (q == p && e > 0);
        if (!divides)
            throw std::invalid_argument("sigma override at " + std::to_string(p) +
                                        ": every finite member must divide the conductor of the curve");
        if (ov && splitting_at(k, p) == SplittingType::Split)
            throw std::invalid_argument("sigma override at " + std::to_string(p) +
                                        ": members must be non-split in K (K_p must be a field)");
    }
    for (auto& [p, e] : n_factored) {
        if (e == 0) continue;
        SigmaEntry entry;
        entry.p = p;
        SplittingType s = splitting_at(k, p);
        entry.eta = eta_minus_one(k, p);
        std::int64_t m = val_at(c, p);
        auto rep_it = reps.find(p);
        if (rep_it == reps.end())
            throw std::invalid_argument("build_sigma: missing local type at prime " + std::to_string(p));

        if (s == SplittingType::Split) {
            entry.epsilon = SignValue::plus();
            entry.in_sigma = false;
            entry.rule = "split";
        } else if (rep_it->second.kind == RepKind::PrincipalSeries) {
            entry.epsilon = SignValue::undetermined("principal series");
            entry.in_sigma = false;
            entry.rule = "not-square-integrable";
        } else {
            auto ex_it = extras.find(p);
            entry.epsilon =
                local_epsilon(p, rep_it->second, s, m, ex_it == extras.end() ? EpsilonExtras{} : ex_it->second);
            if (entry.epsilon.determined()) {
                entry.in_sigma = entry.epsilon.value != entry.eta;
                entry.rule = "epsilon-vs-eta";
            } else {
                entry.rule = "undetermined";
            }
        }
        auto ov_it = overrides.find(p);
        if (ov_it != overrides.end()) {
            if (entry.in_sigma && *entry.in_sigma != ov_it->second) {
                throw std::invalid_argument(
                    "sigma override at " + std::to_string(p) + " contradicts the determined local sign: " +
                    std::to_string(p) + (*entry.in_sigma ? " must" : " cannot") + " lie in Sigma (epsilon=" +
                    (entry.epsilon.determined() ? (entry.epsilon.value > 0 ? "+1" : "-1") : "structural") +
                    ", eta=" + (entry.eta > 0 ? "+1" : "-1") + ")");
            }
            if (!entry.in_sigma) {
                entry.in_sigma = ov_it->second;
                entry.rule = "override";
            }
        }
        report.primes.push_back(entry);
    }
    if (report.fully_determined()) {
        std::int64_t delta = 1;
        std::size_t members = 0;
        for (auto& e : report.primes)
            if (*e.in_sigma) {
                delta *= e.p;
                ++members;
            }
        report.delta = delta;
        report.global_sign = ((members + 1) % 2 == 0) ? 1 : -1;
    }
    return report;
}

}  // namespace heegner
