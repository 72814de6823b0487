#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "heegner/quadarith.hpp"

using namespace heegner;

namespace {

// slow residue-based symbol for odd primes, used to cross-check kronecker
int legendre_by_search(std::int64_t a, std::int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    for (std::int64_t x = 1; x < p; ++x)
        if ((x * x) % p == a) return 1;
    return -1;
}

// exhaustive search for nontrivial solutions of ax^2 + by^2 = z^2 mod p^4
bool conic_solvable_mod(std::int64_t a, std::int64_t b, std::int64_t p) {
    std::int64_t mod = p * p * p * p;
    auto norm = [mod](std::int64_t v) { return ((v % mod) + mod) % mod; };
    a = norm(a);
    b = norm(b);
    for (std::int64_t x = 0; x < mod; ++x)
        for (std::int64_t y = 0; y < mod; ++y) {
            if (x % p == 0 && y % p == 0) continue;
            std::int64_t lhs = (a * x % mod * x + b * y % mod * y) % mod;
            // z^2 = lhs must be solvable with valuation constraints; test all z
            for (std::int64_t z = 0; z < mod; ++z)
                if (z * z % mod == lhs) return true;
        }
    return false;
}

}  // namespace

TEST_CASE("kronecker symbol values") {
    CHECK(kronecker_symbol(-4, 2) == 0);
    CHECK(kronecker_symbol(-4, 5) == 1);   // 2^2 = 4 = -1 mod 5
    CHECK(kronecker_symbol(-3, 2) == -1);  // -3 = 5 mod 8
    CHECK(kronecker_symbol(1, 0) == 1);
    CHECK(kronecker_symbol(2, 0) == 0);
    CHECK(kronecker_symbol(-1, 0) == 1);
    for (std::int64_t p : {3, 5, 7, 11, 13})
        for (std::int64_t a = -20; a <= 20; ++a) CHECK(kronecker_symbol(a, p) == legendre_by_search(a, p));
}

TEST_CASE("kronecker symbol is multiplicative in both arguments") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t a = dist(rng), b = dist(rng), n = dist(rng), m = dist(rng);
        if (n == 0 || m == 0) continue;
        CHECK(kronecker_symbol(a * b, n) == kronecker_symbol(a, n) * kronecker_symbol(b, n));
        CHECK(kronecker_symbol(a, n * m) == kronecker_symbol(a, n) * kronecker_symbol(a, m));
    }
}

TEST_CASE("splitting of small primes") {
    QuadOrder k(-4, 1);
    CHECK(splitting_at(k, 2) == SplittingType::Ramified);
    CHECK(splitting_at(k, 5) == SplittingType::Split);
    CHECK(splitting_at(k, 3) == SplittingType::Inert);
}

TEST_CASE("eichler symbol") {
    CHECK(eichler_symbol(0, SplittingType::Inert) == -1);
    CHECK(eichler_symbol(0, SplittingType::Ramified) == 0);
    CHECK(eichler_symbol(2, SplittingType::Inert) == 1);
    CHECK_THROWS_AS(eichler_symbol(0, SplittingType::Split), std::invalid_argument);
    CHECK(eichler_symbol_ext(0, SplittingType::Split) == 1);
    CHECK(eichler_symbol_ext(5, SplittingType::Split) == 1);
}

TEST_CASE("fundamental discriminants") {
    CHECK(is_fundamental_discriminant(-3));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(-8));
    CHECK(is_fundamental_discriminant(-23));
    CHECK(is_fundamental_discriminant(-67));
    CHECK_FALSE(is_fundamental_discriminant(-9));
    CHECK_FALSE(is_fundamental_discriminant(-12));
    CHECK_FALSE(is_fundamental_discriminant(-100));
    CHECK_FALSE(is_fundamental_discriminant(5));
    CHECK_THROWS_AS(QuadOrder(-12, 1), std::invalid_argument);
    CHECK_THROWS_AS(QuadOrder(-3, 0), std::invalid_argument);
}

TEST_CASE("form counting reproduces small class numbers") {
    CHECK(count_reduced_forms(-3) == 1);
    CHECK(count_reduced_forms(-4) == 1);
    CHECK(count_reduced_forms(-23) == 3);   // (1,1,6), (2,+-1,3)
    CHECK(count_reduced_forms(-100) == 2);  // (1,0,25), (2,2,13); (5,0,5) imprimitive
}

TEST_CASE("conductor formula matches form enumeration") {
    CHECK(class_number(QuadOrder(-3, 1)) == 1);
    CHECK(class_number(QuadOrder(-23, 1)) == 3);
    CHECK(class_number(QuadOrder(-4, 5)) == 2);
    for (std::int64_t d = -3; d >= -200; --d) {
        if (!is_fundamental_discriminant(d)) continue;
        for (std::int64_t c = 1; c * c * (-d) <= 20000; ++c)
            CHECK(class_number(QuadOrder(d, c)) == count_reduced_forms(c * c * d));
    }
}

TEST_CASE("hilbert symbol values") {
    for (std::int64_t b : {1, 2, 3, -5, 7})
        for (std::int64_t p : {2, 3, 5, 7}) CHECK(hilbert_symbol(1, b, p) == 1);
    CHECK(hilbert_symbol(-1, -3, 3) == -1);
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol_inf(-1, -1) == -1);
    CHECK(hilbert_symbol_inf(-1, 2) == 1);
}

TEST_CASE("hilbert symbol agrees with a truncated conic search at p=3") {
    // (a, b)_3 = 1 iff ax^2 + by^2 = z^2 has a primitive solution; checked
    // against exhaustive search mod 3^4
    for (std::int64_t a : {-1, 2, 3, -3, 6})
        for (std::int64_t b : {-1, -3, 5, 3}) {
            bool found = conic_solvable_mod(a, b, 3);
            CHECK((hilbert_symbol(a, b, 3) == 1) == found);
        }
}

TEST_CASE("hilbert symbol is symmetric and bimultiplicative") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::int64_t> dist(-100000, 100000);
    const std::int64_t primes[] = {2, 3, 5, 7, 11, 13};
    for (int i = 0; i < 5000; ++i) {
        std::int64_t a = dist(rng), b = dist(rng), c = dist(rng);
        if (a == 0 || b == 0 || c == 0) continue;
        std::int64_t p = primes[rng() % 6];
        CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
        CHECK(hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p));
    }
}

TEST_CASE("hilbert product formula over all places") {
    std::vector<std::int64_t> primes;
    for (std::int64_t p = 2; p < 100; ++p) {
        bool prime = p >= 2;
        for (std::int64_t q = 2; q * q <= p; ++q)
            if (p % q == 0) prime = false;
        if (prime) primes.push_back(p);
    }
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 500; ++trial) {
        // a, b smooth over the primes below 100
        std::int64_t a = (rng() % 2) ? 1 : -1, b = (rng() % 2) ? 1 : -1;
        for (int j = 0; j < 3; ++j) {
            a *= primes[rng() % primes.size()];
            b *= primes[rng() % primes.size()];
        }
        int prod = hilbert_symbol_inf(a, b);
        for (auto p : primes) prod *= hilbert_symbol(a, b, p);
        CHECK(prod == 1);
    }
}

TEST_CASE("local quadratic classes") {
    CHECK(local_quad_class(QuadOrder(-4, 1), 2) == LocalQuadExt::Sqrt7);
    CHECK(local_quad_class(QuadOrder(-3, 1), 3) == LocalQuadExt::RamifiedUnit);
    CHECK(local_quad_class(QuadOrder(-3, 1), 2) == LocalQuadExt::Unramified);
    CHECK(local_quad_class(QuadOrder(-8, 1), 2) == LocalQuadExt::Sqrt14);
    CHECK_FALSE(local_quad_class(QuadOrder(-4, 1), 5).has_value());  // split
    CHECK(local_quad_class(QuadOrder(-7, 1), 7) == LocalQuadExt::RamifiedUnit);   // -1 non-residue mod 7
    CHECK(local_quad_class(QuadOrder(-20, 1), 5) == LocalQuadExt::RamifiedPrime);  // -4 = 1 mod 5
}

TEST_CASE("ramified class iff ramified splitting") {
    for (std::int64_t d = -3; d >= -120; --d) {
        if (!is_fundamental_discriminant(d)) continue;
        QuadOrder k(d, 1);
        for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
            auto cls = local_quad_class(k, p);
            SplittingType s = splitting_at(k, p);
            if (s == SplittingType::Split) {
                CHECK_FALSE(cls.has_value());
            } else {
                REQUIRE(cls.has_value());
                CHECK((s == SplittingType::Ramified) == is_ramified_class(*cls));
                CHECK((p == 2 ? disc_valuation(*cls) > 0 : disc_valuation(*cls) == 1) ==
                      (s == SplittingType::Ramified));
            }
        }
    }
}
