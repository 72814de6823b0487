#ifndef HEEGNER_LOCALDATA_HPP
#define HEEGNER_LOCALDATA_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "heegner/quadarith.hpp"

namespace heegner {

enum class RepKind { PrincipalSeries, Steinberg, Supercuspidal };

// Discrete classification data of the local automorphic type at a prime p | N.
// n is the conductor exponent val_p(N). For a Steinberg twist by a quadratic
// character psi of conductor a: n = 1 if a = 0, else n = 2a. For a
// supercuspidal induced from a quadratic field F with quasicharacter psi:
// n = d(F) + f(F) * c(psi), i.e. 2*c(psi) when F is unramified and
// disc_valuation(F) + c(psi) when F is ramified.
struct LocalRepType {
    RepKind kind = RepKind::PrincipalSeries;
    unsigned n = 0;
    unsigned steinberg_twist = 0;  // a, conductor of the twisting character
    LocalQuadExt inducing = LocalQuadExt::Unramified;
    unsigned psi_conductor = 0;
    bool minimal = true;
    bool exceptional = false;
    // set when the classification is ambiguous and the caller may want to
    // supply an alternative (e.g. twisted Steinberg instead of supercuspidal
    // at odd p, n = 2)
    bool override_recommended = false;

    static LocalRepType principal_series(unsigned n);
    static LocalRepType steinberg(std::int64_t p, unsigned a);
    static LocalRepType supercuspidal(std::int64_t p, LocalQuadExt inducing, unsigned psi_conductor,
                                      bool minimal = true);
    static LocalRepType exceptional_supercuspidal();  // p = 2, n = 7 only
};

// Throws std::invalid_argument when the type data violates its invariants at p.
void validate_rep(std::int64_t p, const LocalRepType& rep);

LocalRepType default_rep_type(std::int64_t p, unsigned n);

// The (L, n) order datum at a ramified prime on which a newform of local
// conductor p^s lifts. l_classes lists the admissible classes for L.
struct JLLevelDatum {
    std::vector<LocalQuadExt> l_classes;
    unsigned n = 0;
};

// Throws on the untreated case p = 2, s even >= 4 (the form is then a twist
// of one of lower level).
JLLevelDatum jl_local_level(std::int64_t p, unsigned s);

// Classification symbol t(L): -1 unramified, 0 ramified odd p,
// 1 for sqrt3/sqrt7, 2 for sqrt2/6/10/14.
int t_symbol(LocalQuadExt l);

constexpr int mu_infinity = std::numeric_limits<int>::max();

// Distance symbol mu(L, L') in {1, 2, 3, 5, mu_infinity}; symmetric.
int mu_symbol(LocalQuadExt l1, LocalQuadExt l2);

// Dimension of the quaternionic local representation with minimal conductor
// p^a; equals a for a in {1, 2}.
unsigned jl_multiplicity(unsigned a);

}  // namespace heegner

#endif
