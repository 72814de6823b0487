#ifndef HEEGNER_EMBEDTABLES_HPP
#define HEEGNER_EMBEDTABLES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heegner/quadarith.hpp"

namespace heegner {

struct DivisionDatum {
    LocalQuadExt l_class;
    unsigned nu;
};

// Global quaternion order type (N_Eic; N_Car; {(L_p, nu_p)}). Maps go from a
// prime to its exponent (Eichler, Cartan) or to its (L, nu) datum (division).
// The three supports must be pairwise disjoint; the division support is the
// discriminant of the algebra and must have an even number of primes.
struct OrderType {
    std::map<std::int64_t, unsigned> eichler;
    std::map<std::int64_t, unsigned> cartan;
    std::map<std::int64_t, DivisionDatum> division;

    void validate() const;
    // N_Eic * N_Car^2 * prod p^nu over division primes
    std::int64_t level() const;
    std::int64_t delta() const;
};

struct EmbeddingVerdict {
    bool exists = false;
    std::optional<std::int64_t> count;  // present only when a closed formula applies
    std::string rule_id;
};

// Optimal embeddings of the local order of conductor p^m into an Eichler
// order of level p^n. Split algebras always admit one; the unramified case
// requires m >= n/2 and the ramified case m >= (n-1)/2. Counts are known for
// n <= 1: h(m,0) = 1 and h(m,1) = 1 + {O_m/p}.
EmbeddingVerdict eichler_exists(std::int64_t m, unsigned n, SplittingType s);

// Non-split Cartan order of level p^n (n >= 1): only the maximal quadratic
// order embeds optimally.
EmbeddingVerdict cartan_exists(std::int64_t m, unsigned n);

// Existence catalog for orders O_L + pi^(n-1) O in the division algebra over
// Q_p, keyed by the classes of K (the embedded field) and L. rule_id names
// the catalog row used ("div-1a" .. "div-2k"); combinations outside the
// catalog yield exists = false with rule_id "no-row", except that orders with
// L unramified and n even coincide with the order of level n-1 and are
// dispatched accordingly.
EmbeddingVerdict division_exists(std::int64_t p, std::int64_t m, unsigned n, LocalQuadExt k_class,
                                 LocalQuadExt l_class);

// Closed class count at an odd division prime with nu_p = 2:
// 2 when p || c and p inert, p+1 when p does not divide c and p ramifies,
// otherwise 0.
std::int64_t division_count_nu2(std::int64_t p, std::int64_t m, SplittingType s);

struct ComponentData {
    std::vector<std::int64_t> primes;            // the set C
    std::int64_t class_number = 1;               // 2^|C|
    std::vector<std::int64_t> field_disc_parts;  // p* = (-1)^((p-1)/2) p for p in C
};

// Component group of the attached curve: determined when delta is odd or
// nu_2 <= 1, otherwise empty (the 2-adic norm index needs case analysis that
// is not reproduced here).
std::optional<ComponentData> component_data(const OrderType& t);

// h(R_c)/h(R) * prod of local embedding counts, when every prime of the level
// admits a closed count (division primes odd with nu <= 2, Eichler exponents
// <= 1, no Cartan part).
std::optional<std::int64_t> global_embedding_count(const OrderType& t, const QuadOrder& k);

// h(R_c) * prod of local counts: the number of distinguished points of the
// given conductor on the attached curve.
std::optional<std::int64_t> heegner_count(const OrderType& t, const QuadOrder& k);

}  // namespace heegner

#endif
