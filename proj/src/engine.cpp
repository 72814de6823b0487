#include "heegner/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace heegner {

namespace {

std::int64_t val_at(std::int64_t n, std::int64_t p) {
    std::int64_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::int64_t pow_i64(std::int64_t p, unsigned e) {
    std::int64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
}

}  // namespace

void CurveInput::validate() const {
    if (n_factored.empty()) throw std::invalid_argument("CurveInput: N must be > 1");
    for (auto& [p, e] : n_factored) {
        if (p < 2 || e == 0) throw std::invalid_argument("CurveInput: bad factorization entry");
        auto it = reps.find(p);
        if (it == reps.end())
            throw std::invalid_argument("CurveInput: missing local type at " + std::to_string(p));
        if (it->second.n != e)
            throw std::invalid_argument("CurveInput: local type at " + std::to_string(p) +
                                        " has conductor exponent " + std::to_string(it->second.n) +
                                        " but val_p(N) = " + std::to_string(e));
        validate_rep(p, it->second);
    }
    if (reps.size() != n_factored.size())
        throw std::invalid_argument("CurveInput: local types must be given exactly at the primes dividing N");
}

std::int64_t CurveInput::n_value() const {
    __int128 n = 1;
    for (auto& [p, e] : n_factored)
        for (unsigned i = 0; i < e; ++i) n *= p;
    if (n > (__int128)1 << 62) throw std::range_error("CurveInput: N overflows");
    return (std::int64_t)n;
}

unsigned CurveInput::val_n(std::int64_t p) const {
    for (auto& [q, e] : n_factored)
        if (q == p) return e;
    return 0;
}

OrderType select_structure(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                           const SigmaReport& sigma, std::vector<std::string>* warnings,
                           std::map<std::int64_t, std::vector<LocalQuadExt>>* alternatives) {
    input.validate();
    if (!sigma.fully_determined())
        throw std::invalid_argument("select_structure: Sigma membership must be fully determined");
    auto finite = sigma.finite_sigma();
    if (finite.size() % 2 != 0)
        throw std::invalid_argument(
            "select_structure: |Sigma| must be odd including infinity, so the finite part must be even");
    for (auto p : finite) {
        if (input.val_n(p) == 0)
            throw std::invalid_argument("select_structure: Sigma prime " + std::to_string(p) +
                                        " does not divide N");
        if (splitting_at(k, p) == SplittingType::Split)
            throw std::invalid_argument("select_structure: Sigma prime " + std::to_string(p) +
                                        " splits in K; K_p must be a field");
    }

    OrderType t;
    for (auto p : finite) {
        unsigned s = input.val_n(p);
        JLLevelDatum datum = jl_local_level(p, s);  // throws on the p=2 twist case
        auto kp = local_quad_class(k, p);
        LocalQuadExt choice = datum.l_classes.front();
        // prefer the class isomorphic to K_p: it admits the widest existence row
        if (kp)
            for (auto lc : datum.l_classes)
                if (lc == *kp) choice = lc;
        if (alternatives) {
            std::vector<LocalQuadExt> alts;
            for (auto lc : datum.l_classes)
                if (lc != choice) alts.push_back(lc);
            (*alternatives)[p] = alts;
        }
        t.division[p] = {choice, datum.n};
    }
    for (auto& [p, e] : input.n_factored) {
        if (t.division.count(p)) continue;
        bool cartan = splitting_at(k, p) == SplittingType::Inert && e % 2 == 0 && c % p != 0;
        if (cartan)
            t.cartan[p] = e / 2;
        else
            t.eichler[p] = e;
    }
    t.validate();
    if (warnings && t.division.empty())
        warnings->push_back(
            "discriminant 1: the algebra is split and the curve is classical; embedding arithmetic still applies");
    return t;
}

namespace {

struct DivisionScan {
    bool ok = false;
    std::int64_t m_prime = 0;
    unsigned n_prime = 0;
    std::string rule_id;
};

// Lexicographically minimal (m', n') >= (m, n) passing the division catalog,
// with m' fixed to m in elliptic mode.
DivisionScan scan_division(std::int64_t p, std::int64_t m, unsigned n, LocalQuadExt k_class,
                           LocalQuadExt l_class, bool allow_m_raise) {
    std::int64_t m_max = allow_m_raise ? m + (std::int64_t)n + 3 : m;
    for (std::int64_t mp = m; mp <= m_max; ++mp) {
        unsigned n_max = n + 2 * (unsigned)mp + 4;
        for (unsigned np = n; np <= n_max; ++np) {
            EmbeddingVerdict v = division_exists(p, mp, np, k_class, l_class);
            if (v.exists) return {true, mp, np, v.rule_id};
        }
    }
    return {};
}

}  // namespace

AdjustResult adjust_levels(const OrderType& minimal, const CurveInput& input, const QuadOrder& k,
                           std::int64_t c, const SigmaReport& sigma) {
    (void)sigma;
    AdjustResult res;
    res.order = minimal;
    res.c_prime = c;
    res.ok = true;
    bool elliptic = input.mode == AnalysisMode::EllipticFixedConductor;

    for (auto& [p, e] : minimal.cartan) {
        PrimeAdjustment adj;
        adj.p = p;
        adj.part = 'C';
        adj.m = adj.m_prime = val_at(c, p);
        adj.n = adj.n_prime = e;
        EmbeddingVerdict v = cartan_exists(adj.m, e);
        adj.rule_id = v.rule_id;
        adj.passed = v.exists;
        if (!v.exists) {
            res.ok = false;
            res.diagnostics.push_back("Cartan prime " + std::to_string(p) +
                                      " requires p not dividing the conductor of the quadratic order");
        }
        res.trace.push_back(adj);
    }
    for (auto& [p, e] : minimal.eichler) {
        PrimeAdjustment adj;
        adj.p = p;
        adj.part = 'E';
        adj.m = val_at(c, p);
        adj.n = adj.n_prime = e;
        SplittingType s = splitting_at(k, p);
        std::int64_t mp = adj.m;
        EmbeddingVerdict v = eichler_exists(mp, e, s);
        while (!v.exists && !elliptic && mp < adj.m + (std::int64_t)e + 2) {
            ++mp;
            v = eichler_exists(mp, e, s);
        }
        adj.m_prime = mp;
        adj.rule_id = v.rule_id;
        adj.passed = v.exists;
        if (!v.exists) {
            res.ok = false;
            res.diagnostics.push_back(
                "Eichler prime " + std::to_string(p) + " (" + splitting_name(s) + ", n=" + std::to_string(e) +
                ", m=" + std::to_string(adj.m) +
                "): no optimal embedding at fixed conductor; the hypothesis set does not cover this "
                "configuration");
        } else if (mp > adj.m) {
            res.c_prime *= pow_i64(p, (unsigned)(mp - adj.m));
        }
        res.trace.push_back(adj);
    }
    for (auto& [p, d] : minimal.division) {
        PrimeAdjustment adj;
        adj.p = p;
        adj.part = 'D';
        adj.m = val_at(c, p);
        adj.n = d.nu;
        adj.l_class = d.l_class;
        auto kp = local_quad_class(k, p);
        if (!kp) throw std::logic_error("adjust_levels: division prime splits in K");
        DivisionScan scan = scan_division(p, adj.m, d.nu, *kp, d.l_class, !elliptic);
        if (!scan.ok) {
            res.ok = false;
            adj.m_prime = adj.m;
            adj.n_prime = adj.n;
            res.diagnostics.push_back("division prime " + std::to_string(p) +
                                      ": no admissible level raise found within the scan bound");
        } else {
            adj.m_prime = scan.m_prime;
            adj.n_prime = scan.n_prime;
            adj.rule_id = scan.rule_id;
            adj.passed = true;
            if (scan.m_prime > adj.m) res.c_prime *= pow_i64(p, (unsigned)(scan.m_prime - adj.m));
            res.order.division[p].nu = scan.n_prime;
        }
        res.trace.push_back(adj);
    }
    std::sort(res.trace.begin(), res.trace.end(),
              [](const PrimeAdjustment& a, const PrimeAdjustment& b) { return a.p < b.p; });
    return res;
}

AssumptionReport check_assumption_2n(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                                     const SigmaReport& sigma) {
    AssumptionReport rep;
    unsigned val2_n = input.val_n(2);
    unsigned val3_n = input.val_n(3);
    bool two_in_delta = sigma.contains(2);
    SplittingType s2 = splitting_at(k, 2);
    SplittingType s3 = splitting_at(k, 3);
    // The Eichler part at p consists of the primes outside Delta that are not
    // Cartan; its exponent at p equals val_p(N) whenever p is Eichler.
    bool two_cartan = !two_in_delta && s2 == SplittingType::Inert && val2_n % 2 == 0 && c % 2 != 0;
    bool three_cartan = !sigma.contains(3) && s3 == SplittingType::Inert && val3_n % 2 == 0 && c % 3 != 0;
    unsigned val2_eic = (!two_in_delta && !two_cartan) ? val2_n : 0;
    unsigned val3_eic = (!sigma.contains(3) && !three_cartan) ? val3_n : 0;

    // (1) 2^3 | N_Eic: 2 splits, or val_2(N_Eic) odd with 2 inert
    if (val2_eic >= 3) {
        bool pass = s2 == SplittingType::Split || (val2_eic % 2 == 1 && s2 == SplittingType::Inert);
        rep.conditions[0] = {pass ? CheckStatus::Pass : CheckStatus::Fail,
                             "val_2(N_Eic)=" + std::to_string(val2_eic) + ", 2 is " + splitting_name(s2)};
    } else {
        rep.conditions[0] = {CheckStatus::NotApplicable, "2^3 does not divide N_Eic"};
    }
    // (2) Delta even and 2^3 | N: 2 inert, and odd val_2(N) if supercuspidal at 2
    if (two_in_delta && val2_n >= 3) {
        bool pass = s2 == SplittingType::Inert;
        auto it = input.reps.find(2);
        bool sc = it != input.reps.end() && it->second.kind == RepKind::Supercuspidal;
        if (pass && sc && val2_n % 2 == 0) pass = false;
        rep.conditions[1] = {pass ? CheckStatus::Pass : CheckStatus::Fail,
                             std::string("2 is ") + splitting_name(s2) +
                                 (sc ? ", supercuspidal with val_2(N)=" + std::to_string(val2_n) : "")};
    } else {
        rep.conditions[1] = {CheckStatus::NotApplicable, "Delta odd or val_2(N) < 3"};
    }
    // (3) 2-minimal conductor among twists (user-asserted)
    if (val2_n == 0) {
        rep.conditions[2] = {CheckStatus::Pass, "N odd: the 2-component is unramified"};
    } else {
        rep.conditions[2] = {input.two_minimal ? CheckStatus::Pass : CheckStatus::Fail,
                             input.two_minimal ? "asserted minimal" : "declared non-minimal"};
    }
    // (4) val_3(N_Eic) = 4 and 3 inert: val_3(c) != 1
    if (val3_eic == 4 && s3 == SplittingType::Inert) {
        bool pass = val_at(c, 3) != 1;
        rep.conditions[3] = {pass ? CheckStatus::Pass : CheckStatus::Fail,
                             "val_3(c)=" + std::to_string(val_at(c, 3))};
    } else {
        rep.conditions[3] = {CheckStatus::NotApplicable, "val_3(N_Eic) != 4 or 3 not inert"};
    }
    return rep;
}

MissingCaseFlags missing_case_flags(unsigned val3_n, bool three_in_delta, SplittingType s3,
                                    std::int64_t val3_c, unsigned val2_n, bool two_in_delta,
                                    SplittingType s2) {
    MissingCaseFlags f;
    f.three_inert_val4 = val3_n == 4 && !three_in_delta && s3 == SplittingType::Inert && val3_c == 1;
    f.two_ramified = val2_n >= 3 && !two_in_delta && s2 == SplittingType::Ramified;
    return f;
}

MissingCaseFlags detect_missing_cases(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                                      const SigmaReport& sigma) {
    return missing_case_flags(input.val_n(3), sigma.contains(3), splitting_at(k, 3), val_at(c, 3),
                              input.val_n(2), sigma.contains(2), splitting_at(k, 2));
}

HeegnerReport analyze(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                      const std::map<std::int64_t, bool>& sigma_overrides,
                      const std::map<std::int64_t, EpsilonExtras>& extras, const Assertions& assertions) {
    input.validate();
    if (c < 1) throw std::invalid_argument("analyze: conductor c must be >= 1");
    HeegnerReport rep;
    rep.conductor = c;
    rep.assertions = assertions;
    rep.sigma = build_sigma(input.n_factored, input.reps, k, c, sigma_overrides, extras);

    if (!rep.sigma.fully_determined()) {
        rep.status = AnalysisStatus::Blocked;
        for (auto& e : rep.sigma.primes)
            if (!e.in_sigma)
                rep.blocked_reason += "sign at " + std::to_string(e.p) + " undetermined (" +
                                      e.epsilon.reason + "); ";
        rep.blocked_reason += "supply a Sigma override";
        return rep;
    }
    if (rep.sigma.finite_sigma().size() % 2 != 0)
        throw std::invalid_argument(
            "analyze: Sigma including infinity has even cardinality; the sign of the functional equation "
            "is +1 and no point construction applies");

    rep.assumption_2n = check_assumption_2n(input, k, c, rep.sigma);
    rep.missing_cases = detect_missing_cases(input, k, c, rep.sigma);

    std::map<std::int64_t, std::vector<LocalQuadExt>> alternatives;
    rep.minimal_order = select_structure(input, k, c, rep.sigma, &rep.warnings, &alternatives);

    AdjustResult adj = adjust_levels(rep.minimal_order, input, k, c, rep.sigma);
    rep.order_type = adj.order;
    rep.c_prime = adj.c_prime;
    rep.adjustments = adj.trace;
    for (auto& a : rep.adjustments) {
        auto it = alternatives.find(a.p);
        if (it != alternatives.end()) a.l_alternatives = it->second;
    }
    rep.exists = adj.ok;
    for (auto& d : adj.diagnostics) rep.diagnostics.push_back(d);
    rep.level = rep.order_type.level();
    rep.components = component_data(rep.order_type);
    rep.rationality_field = "H_" + std::to_string(rep.c_prime);
    rep.uniformization =
        "the curve attached to the selected order covers the minimal one, so the modular parametrization "
        "factors through it";

    if (rep.exists) {
        QuadOrder adjusted(k.disc, rep.c_prime);
        rep.heegner_points = heegner_count(rep.order_type, adjusted);
        rep.embedding_count = global_embedding_count(rep.order_type, adjusted);
        rep.conclusion = "Heegner points of conductor " + std::to_string(rep.c_prime) +
                         " exist on the selected curve and are rational over " + rep.rationality_field;
        if (assertions.l_prime_nonzero && assertions.no_cm)
            rep.conclusion +=
                "; granted the asserted nonvanishing of the derivative and the absence of CM over "
                "imaginary quadratic subfields, the chi-eigenspace of the Mordell-Weil group has dimension 1";
    } else {
        rep.conclusion = "no Heegner point of the requested conductor exists under the fixed-conductor "
                         "constraints; see diagnostics";
    }
    return rep;
}

}  // namespace heegner
