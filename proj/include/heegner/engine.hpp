#ifndef HEEGNER_ENGINE_HPP
#define HEEGNER_ENGINE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heegner/embedtables.hpp"
#include "heegner/localdata.hpp"
#include "heegner/quadarith.hpp"
#include "heegner/signs.hpp"

namespace heegner {

enum class AnalysisMode { EllipticFixedConductor, AbelianAdjustable };

struct CurveInput {
    std::vector<std::pair<std::int64_t, unsigned>> n_factored;  // conductor N
    std::map<std::int64_t, LocalRepType> reps;                  // exactly the primes dividing N
    bool primitive = true;
    bool two_minimal = true;
    AnalysisMode mode = AnalysisMode::EllipticFixedConductor;

    void validate() const;
    std::int64_t n_value() const;
    unsigned val_n(std::int64_t p) const;
};

enum class CheckStatus { Pass, Fail, NotApplicable };

struct AssumptionCheck {
    CheckStatus status = CheckStatus::NotApplicable;
    std::string detail;
};

struct AssumptionReport {
    std::array<AssumptionCheck, 4> conditions;
    bool all_pass() const {
        for (auto& c : conditions)
            if (c.status == CheckStatus::Fail) return false;
        return true;
    }
};

struct MissingCaseFlags {
    bool three_inert_val4 = false;  // val_3(N)=4, 3 not in Delta, 3 inert, val_3(c)=1
    bool two_ramified = false;      // val_2(N)>=3, 2 not in Delta, 2 ramified
    bool any() const { return three_inert_val4 || two_ramified; }
};

struct PrimeAdjustment {
    std::int64_t p = 0;
    char part = '?';  // 'E' Eichler, 'C' Cartan, 'D' division
    std::int64_t m = 0, m_prime = 0;
    unsigned n = 0, n_prime = 0;
    std::string rule_id;
    LocalQuadExt l_class = LocalQuadExt::Unramified;            // division only
    std::vector<LocalQuadExt> l_alternatives;                   // other admissible choices
    bool passed = false;
};

struct AdjustResult {
    OrderType order;
    std::int64_t c_prime = 0;
    std::vector<PrimeAdjustment> trace;
    bool ok = false;
    std::vector<std::string> diagnostics;
};

struct Assertions {
    bool l_prime_nonzero = false;
    bool no_cm = false;
};

enum class AnalysisStatus { Ok, Blocked };

struct HeegnerReport {
    AnalysisStatus status = AnalysisStatus::Ok;
    std::string blocked_reason;
    SigmaReport sigma;
    OrderType order_type;       // after adjustment
    OrderType minimal_order;    // before adjustment
    std::int64_t level = 0;
    std::int64_t conductor = 0;  // c
    std::int64_t c_prime = 0;
    std::vector<PrimeAdjustment> adjustments;
    bool exists = false;
    std::optional<std::int64_t> heegner_points;
    std::optional<std::int64_t> embedding_count;
    std::optional<ComponentData> components;
    std::string rationality_field;
    AssumptionReport assumption_2n;
    MissingCaseFlags missing_cases;
    Assertions assertions;
    std::string uniformization;
    std::string conclusion;
    std::vector<std::string> warnings;
    std::vector<std::string> diagnostics;
};

// Chooses the minimal order type: division data at the Sigma primes through
// the lift-level classification, Cartan primes at inert even-exponent primes
// away from c, Eichler elsewhere.
OrderType select_structure(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                           const SigmaReport& sigma, std::vector<std::string>* warnings = nullptr,
                           std::map<std::int64_t, std::vector<LocalQuadExt>>* alternatives = nullptr);

// Raises per-prime data to the lexicographically minimal passing pair
// (m', n'): elliptic mode keeps m fixed and raises only division levels;
// abelian mode may raise m as well, multiplying the conductor.
AdjustResult adjust_levels(const OrderType& minimal, const CurveInput& input, const QuadOrder& k,
                           std::int64_t c, const SigmaReport& sigma);

AssumptionReport check_assumption_2n(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                                     const SigmaReport& sigma);

MissingCaseFlags detect_missing_cases(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                                      const SigmaReport& sigma);

// Raw predicate behind detect_missing_cases, exposed for grid testing.
MissingCaseFlags missing_case_flags(unsigned val3_n, bool three_in_delta, SplittingType s3,
                                    std::int64_t val3_c, unsigned val2_n, bool two_in_delta,
                                    SplittingType s2);

HeegnerReport analyze(const CurveInput& input, const QuadOrder& k, std::int64_t c,
                      const std::map<std::int64_t, bool>& sigma_overrides = {},
                      const std::map<std::int64_t, EpsilonExtras>& extras = {},
                      const Assertions& assertions = {});

}  // namespace heegner

#endif
