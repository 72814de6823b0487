#include "heegner/localdata.hpp"

#include <stdexcept>
#include <string>

namespace heegner {

namespace {

bool class_legal_at(LocalQuadExt l, std::int64_t p) {
    switch (l) {
        case LocalQuadExt::Unramified: return true;
        case LocalQuadExt::RamifiedUnit:
        case LocalQuadExt::RamifiedPrime: return p != 2;
        default: return p == 2;
    }
}

unsigned supercuspidal_conductor(std::int64_t p, LocalQuadExt f, unsigned psi_conductor) {
    if (t_symbol(f) == -1) return 2 * psi_conductor;
    return (unsigned)disc_valuation(f) + psi_conductor;
}

}  // namespace

LocalRepType LocalRepType::principal_series(unsigned n) {
    LocalRepType r;
    r.kind = RepKind::PrincipalSeries;
    r.n = n;
    return r;
}

LocalRepType LocalRepType::steinberg(std::int64_t p, unsigned a) {
    LocalRepType r;
    r.kind = RepKind::Steinberg;
    r.steinberg_twist = a;
    r.n = (a == 0) ? 1 : 2 * a;
    validate_rep(p, r);
    return r;
}

LocalRepType LocalRepType::supercuspidal(std::int64_t p, LocalQuadExt inducing, unsigned psi_conductor,
                                         bool minimal) {
    LocalRepType r;
    r.kind = RepKind::Supercuspidal;
    r.inducing = inducing;
    r.psi_conductor = psi_conductor;
    r.minimal = minimal;
    r.n = supercuspidal_conductor(p, inducing, psi_conductor);
    validate_rep(p, r);
    return r;
}

LocalRepType LocalRepType::exceptional_supercuspidal() {
    LocalRepType r;
    r.kind = RepKind::Supercuspidal;
    r.exceptional = true;
    r.minimal = true;
    r.n = 7;
    return r;
}

void validate_rep(std::int64_t p, const LocalRepType& rep) {
    switch (rep.kind) {
        case RepKind::PrincipalSeries:
            return;
        case RepKind::Steinberg: {
            unsigned a = rep.steinberg_twist;
            if (p == 2) {
                if (a != 0 && a != 2 && a != 3)
                    throw std::invalid_argument("Steinberg at p=2: twist conductor must be 0, 2 or 3");
            } else if (a > 1) {
                throw std::invalid_argument("Steinberg at odd p: twist conductor must be 0 or 1");
            }
            unsigned expect = (a == 0) ? 1 : 2 * a;
            if (rep.n != expect)
                throw std::invalid_argument("Steinberg: n must equal 1 (a=0) or 2a");
            return;
        }
        case RepKind::Supercuspidal: {
            if (rep.exceptional) {
                if (p != 2 || rep.n != 7)
                    throw std::invalid_argument("exceptional supercuspidal only arises at p=2, n=7");
                return;
            }
            if (!class_legal_at(rep.inducing, p))
                throw std::invalid_argument("supercuspidal inducing field class not defined at this p");
            if (rep.psi_conductor == 0 && t_symbol(rep.inducing) != -1)
                throw std::invalid_argument("supercuspidal from a ramified field needs a ramified quasicharacter");
            if (rep.psi_conductor == 0 && t_symbol(rep.inducing) == -1)
                throw std::invalid_argument("supercuspidal from the unramified field needs psi_conductor >= 1");
            unsigned expect = supercuspidal_conductor(p, rep.inducing, rep.psi_conductor);
            if (rep.n != expect)
                throw std::invalid_argument("supercuspidal: n inconsistent with inducing field and psi conductor");
            if (rep.n < 2) throw std::invalid_argument("supercuspidal: n must be >= 2");
            if (p >= 5 && rep.n != 2) throw std::invalid_argument("supercuspidal at p>=5 has n = 2");
            if (p == 3 && rep.n > 5) throw std::invalid_argument("supercuspidal at p=3 has n <= 5");
            if (p == 2 && rep.n > 8) throw std::invalid_argument("supercuspidal at p=2 has n <= 8");
            return;
        }
    }
}

LocalRepType default_rep_type(std::int64_t p, unsigned n) {
    unsigned max_n = p >= 5 ? 2 : (p == 3 ? 5 : 8);
    if (n > max_n)
        throw std::invalid_argument("default_rep_type: conductor exponent " + std::to_string(n) +
                                    " not admissible at p=" + std::to_string(p));
    if (n == 0) return LocalRepType::principal_series(0);
    if (n == 1) return LocalRepType::steinberg(p, 0);
    if (n == 2) {
        // Default supercuspidal; at odd p a twisted Steinberg also has n = 2,
        // so flag the ambiguity for the caller.
        LocalRepType r;
        if (p == 2)
            r = LocalRepType::supercuspidal(2, LocalQuadExt::Unramified, 1);
        else
            r = LocalRepType::supercuspidal(p, LocalQuadExt::RamifiedPrime, 1);
        r.override_recommended = (p != 2);
        return r;
    }
    if (p == 3) {
        if (n == 4) return LocalRepType::supercuspidal(3, LocalQuadExt::Unramified, 2);
        return LocalRepType::supercuspidal(3, LocalQuadExt::RamifiedPrime, n - 1);
    }
    // p = 2, n in {3..8}
    switch (n) {
        case 3: return LocalRepType::supercuspidal(2, LocalQuadExt::Sqrt3, 1);
        case 5: return LocalRepType::supercuspidal(2, LocalQuadExt::Sqrt3, 3);
        case 7: return LocalRepType::exceptional_supercuspidal();
        case 4: {
            LocalRepType r = LocalRepType::supercuspidal(2, LocalQuadExt::Unramified, 2);
            r.override_recommended = true;  // Steinberg twist (a=2) also has n = 4
            return r;
        }
        case 6: {
            LocalRepType r = LocalRepType::supercuspidal(2, LocalQuadExt::Unramified, 3);
            r.override_recommended = true;  // Steinberg twist (a=3) also has n = 6
            return r;
        }
        default: return LocalRepType::supercuspidal(2, LocalQuadExt::Unramified, 4);  // n = 8
    }
}

JLLevelDatum jl_local_level(std::int64_t p, unsigned s) {
    if (s < 1) throw std::invalid_argument("jl_local_level: s must be >= 1");
    if (p != 2) {
        if (s % 2 == 1) return {{LocalQuadExt::Unramified}, s};
        return {{LocalQuadExt::RamifiedUnit, LocalQuadExt::RamifiedPrime}, s};
    }
    if (s % 2 == 1) return {{LocalQuadExt::Unramified}, s};
    if (s == 2) return {{LocalQuadExt::Sqrt3, LocalQuadExt::Sqrt7}, 2};
    throw std::invalid_argument(
        "jl_local_level: p=2 with even conductor exponent >= 4 is a twist of lower level, out of scope");
}

int t_symbol(LocalQuadExt l) {
    switch (l) {
        case LocalQuadExt::Unramified: return -1;
        case LocalQuadExt::RamifiedUnit:
        case LocalQuadExt::RamifiedPrime: return 0;
        case LocalQuadExt::Sqrt3:
        case LocalQuadExt::Sqrt7: return 1;
        default: return 2;
    }
}

int mu_symbol(LocalQuadExt l1, LocalQuadExt l2) {
    if (l1 == l2) return mu_infinity;
    int t1 = t_symbol(l1);
    int t2 = t_symbol(l2);
    if (t1 == -1 || t2 == -1) return 1;
    if (t1 == 0 && t2 == 0) return 2;
    if (t1 == 1 && t2 == 1) return 3;
    if ((t1 == 1 && t2 == 2) || (t1 == 2 && t2 == 1)) return 3;
    return 5;  // both t = 2, distinct
}

unsigned jl_multiplicity(unsigned a) {
    if (a != 1 && a != 2) throw std::invalid_argument("jl_multiplicity: minimal conductor exponent must be 1 or 2");
    return a;
}

}  // namespace heegner
