#ifndef HEEGNER_SIGNS_HPP
#define HEEGNER_SIGNS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heegner/localdata.hpp"
#include "heegner/quadarith.hpp"

namespace heegner {

struct SignValue {
    int value = 0;  // +1, -1, or 0 for undetermined
    std::string reason;

    static SignValue plus() { return {1, {}}; }
    static SignValue minus() { return {-1, {}}; }
    static SignValue undetermined(std::string why) { return {0, std::move(why)}; }
    bool determined() const { return value != 0; }
};

// eta_{K,p}(-1) = (-1, disc K)_p. +1 at split primes, +1 at inert odd primes,
// (-1)^((p-1)/2) at ramified odd primes.
int eta_minus_one(const QuadOrder& k, std::int64_t p);

// Character-level data beyond conductors, supplied as explicit relation flags.
struct EpsilonExtras {
    // asserts chi_p^{-1} = psi o Nr for a Steinberg twist psi
    std::optional<bool> steinberg_norm_relation;
};

// Local sign of the twisted representation at p | N, for p non-split in K,
// where m = val_p(c). Only the conductor-level rules are evaluated; anything
// needing character values is reported undetermined so the caller can decide
// through an explicit Sigma override.
SignValue local_epsilon(std::int64_t p, const LocalRepType& rep, SplittingType s, std::int64_t m,
                        const EpsilonExtras& extras = {});

struct SigmaEntry {
    std::int64_t p = 0;
    SignValue epsilon;
    int eta = 1;
    std::optional<bool> in_sigma;
    std::string rule;
};

struct SigmaReport {
    std::vector<SigmaEntry> primes;
    bool includes_infinity = true;
    std::optional<int> global_sign;       // (-1)^{|Sigma|} with infinity counted
    std::optional<std::int64_t> delta;    // product of the finite members
    bool fully_determined() const;
    std::vector<std::int64_t> finite_sigma() const;
    bool contains(std::int64_t p) const;
};

// Builds Sigma from the local rules; overrides fill undetermined memberships
// and must agree with determined ones. Overrides violate the structure when
// they name a prime not dividing N or a prime split in K.
SigmaReport build_sigma(const std::vector<std::pair<std::int64_t, unsigned>>& n_factored,
                        const std::map<std::int64_t, LocalRepType>& reps, const QuadOrder& k, std::int64_t c,
                        const std::map<std::int64_t, bool>& overrides = {},
                        const std::map<std::int64_t, EpsilonExtras>& extras = {});

}  // namespace heegner

#endif
