#ifndef HEEGNER_PADIC_ORACLE_HPP
#define HEEGNER_PADIC_ORACLE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heegner/embedtables.hpp"
#include "heegner/quadarith.hpp"

namespace heegner {
namespace oracle {

using Vec4 = std::array<std::uint64_t, 4>;

enum class ModelKind { Eichler, Cartan, Division };

constexpr std::uint64_t default_budget = 1'000'000'000'000ull;  // bound on |order / p^k| for counting
constexpr std::uint64_t node_cap = 1u << 27;                    // enumeration safety valve

struct OracleBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Truncated model of a local quaternion order: ambient algebra with exact
// multiplication mod p^k plus a Howell-form module basis giving an exact
// membership test at any precision j <= k.
//
// Eichler(n): matrices over Z/p^k with lower-left entry divisible by p^n.
// Cartan(n): preimage of the embedded ring (Z_{p^2}/p^n) under reduction.
// Division(L, n): O_L + pi^(n-1) O inside D_p = Q_{p^2} + Q_{p^2} j, j^2 = p,
//   with Q_{p^2} realized as Z/p^k[w]/(f) for a fixed monic f irreducible
//   mod p, and O_L embedded through an exact generator.
struct FiniteRingModel {
    ModelKind kind;
    std::int64_t p = 0;
    unsigned k = 0;  // arithmetic is mod p^k
    unsigned n = 0;
    LocalQuadExt l_class = LocalQuadExt::Unramified;  // Division only
    std::uint64_t pk = 0;                             // p^k

    // minimal polynomial x^2 - eps x - delta of w (Cartan / Division)
    std::uint64_t eps = 0, delta = 0;

    struct BasisRow {
        int pivot_col;
        unsigned pivot_val;
        Vec4 row;
    };
    std::vector<BasisRow> basis;  // Howell form mod p^k, pivot columns increasing
    // Howell forms of the order at every working precision 1..k; membership
    // mod p^j needs the reduced form, not the filtered full-precision one
    // (a full-precision row can carry lower-valuation content past its pivot)
    std::vector<std::vector<BasisRow>> basis_at;
    Vec4 one{};                   // coordinates of the identity
    Vec4 embed_gen{};             // image of the O_L generator (Division)

    Vec4 mul(const Vec4& a, const Vec4& b) const;
    std::uint64_t trd(const Vec4& a) const;
    std::uint64_t nrd(const Vec4& a) const;
    Vec4 conj(const Vec4& a) const;  // bar(a) = Trd(a) - a
    bool in_order(Vec4 z, unsigned precision) const;
};

FiniteRingModel build_model(ModelKind kind, std::int64_t p, unsigned n, unsigned k,
                            std::optional<LocalQuadExt> l = std::nullopt);

// Trace and reduced norm of the generator p^m * omega of the local quadratic
// order of conductor p^m (omega generating the maximal order of the class).
struct LocalOrderDescriptor {
    std::int64_t trace = 0;
    std::int64_t norm = 0;
};

// k_class empty means the split quadratic algebra.
LocalOrderDescriptor local_descriptor(std::int64_t p, std::optional<LocalQuadExt> k_class, std::int64_t m);

unsigned precision_policy(unsigned n, std::int64_t m);

struct OracleResult {
    bool exists = false;
    std::optional<std::int64_t> class_count;
    unsigned precision_used = 0;
    std::vector<Vec4> witnesses;  // sorted; filled in counting mode
};

enum class EnumerateMode { ExistenceOnly, Count };

// Enumerates order elements satisfying y^2 - t y + nm = 0 mod p^k by lifting
// solutions level by level, keeping the optimality condition that the
// conductor p^(m-1) generator image stays outside the order. In Count mode
// the class count is the number of unit-conjugation orbits, computed exactly
// from stabilizer orders; it is omitted when |order/p^k| exceeds the budget.
OracleResult enumerate_optimal(const FiniteRingModel& model, const LocalOrderDescriptor& gen, std::int64_t m,
                               EnumerateMode mode, std::uint64_t budget = default_budget);

struct VerifyCell {
    ModelKind kind;
    std::int64_t p;
    std::int64_t m;
    unsigned n;
    std::optional<LocalQuadExt> k_class;  // empty = split
    LocalQuadExt l_class;                 // Division only
    bool table_exists = false;
    bool oracle_exists = false;
    std::optional<std::int64_t> table_count;
    std::optional<std::int64_t> oracle_count;
    std::string rule_id;
    unsigned precision = 0;
    bool skipped = false;  // off-catalog cell, not comparable to a row
    bool match = true;
};

struct VerifyReport {
    std::vector<VerifyCell> cells;
    bool all_match = true;
    std::size_t mismatches = 0;
    std::size_t skipped = 0;
};

// Sweeps the (m, n, class) grid for one model kind at one prime and compares
// oracle verdicts (and counts, where closed formulas exist and the budget
// allows) against the catalog. forced_precision = 0 applies the per-cell
// policy k = n + 2m + 2; a nonzero value overrides it (clamped to >= n + 2).
VerifyReport verify_table(ModelKind kind, std::int64_t p, std::int64_t max_m, unsigned max_n,
                          std::uint64_t budget = default_budget, bool with_counts = true,
                          unsigned forced_precision = 0);

}  // namespace oracle
}  // namespace heegner

#endif
