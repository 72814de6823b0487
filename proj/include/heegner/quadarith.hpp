#ifndef HEEGNER_QUADARITH_HPP
#define HEEGNER_QUADARITH_HPP

#include <cstdint>
#include <optional>

namespace heegner {

// How a rational prime behaves in an imaginary quadratic field.
enum class SplittingType { Split, Inert, Ramified };

// Isomorphism class of a quadratic extension of Q_p.
// At odd p the possible classes are Unramified, RamifiedUnit (= Q_p(sqrt(u*p))
// with u a non-residue) and RamifiedPrime (= Q_p(sqrt(p))).
// At p = 2 the seven classes are Q_2(sqrt(d)) for d in {5, 3, 7, 2, 6, 10, 14},
// where sqrt(5) generates the unramified extension.
enum class LocalQuadExt {
    Unramified,
    RamifiedUnit,
    RamifiedPrime,
    Sqrt3,
    Sqrt7,
    Sqrt2,
    Sqrt6,
    Sqrt10,
    Sqrt14,
};

bool is_ramified_class(LocalQuadExt l);

// Valuation of the discriminant of the class: 0, 1 (odd p), 2 (sqrt3/7),
// or 3 (sqrt2/6/10/14).
int disc_valuation(LocalQuadExt l);

const char* class_name(LocalQuadExt l);
const char* splitting_name(SplittingType s);

// An order R_c of conductor c in the imaginary quadratic field of fundamental
// discriminant `disc` (< 0). Construction validates both fields.
struct QuadOrder {
    std::int64_t disc;       // fundamental discriminant, negative
    std::int64_t conductor;  // c >= 1

    QuadOrder(std::int64_t fundamental_disc, std::int64_t c);

    std::int64_t order_disc() const { return conductor * conductor * disc; }
};

bool is_fundamental_discriminant(std::int64_t d);

// Kronecker symbol (a|n), totally multiplicative in n, defined for all n.
int kronecker_symbol(std::int64_t a, std::int64_t n);

SplittingType splitting_at(const QuadOrder& k, std::int64_t p);

// Eichler symbol {O_m / p} of the local quadratic order of conductor p^m:
// -1 if m = 0 and inert, 0 if m = 0 and ramified, 1 if m >= 1.
// Rejects Split (the symbol is defined for field extensions only).
int eichler_symbol(std::int64_t m, SplittingType s);

// Same symbol extended by the +1 convention at split primes, used by the
// counting formulas where the split local factor is always nonzero.
int eichler_symbol_ext(std::int64_t m, SplittingType s);

// Number of classes of primitive reduced binary quadratic forms of the given
// negative discriminant. Independent oracle for class_number.
std::int64_t count_reduced_forms(std::int64_t disc);

// h(R_c) by the conductor formula, with h(D_K) obtained from form counting.
std::int64_t class_number(const QuadOrder& k);

// Hilbert symbol (a,b)_p at a finite prime p. Arguments are nonzero integers;
// a rational is represented by any integer in its square class (num*den).
int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t p);

// Hilbert symbol at the real place: -1 iff both arguments are negative.
int hilbert_symbol_inf(std::int64_t a, std::int64_t b);

// Class of K tensor Q_p; empty when p splits.
std::optional<LocalQuadExt> local_quad_class(const QuadOrder& k, std::int64_t p);

}  // namespace heegner

#endif
