#include "heegner/quadarith.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace heegner {

bool is_ramified_class(LocalQuadExt l) { return l != LocalQuadExt::Unramified; }

int disc_valuation(LocalQuadExt l) {
    switch (l) {
        case LocalQuadExt::Unramified: return 0;
        case LocalQuadExt::RamifiedUnit:
        case LocalQuadExt::RamifiedPrime: return 1;
        case LocalQuadExt::Sqrt3:
        case LocalQuadExt::Sqrt7: return 2;
        default: return 3;
    }
}

const char* class_name(LocalQuadExt l) {
    switch (l) {
        case LocalQuadExt::Unramified: return "unram";
        case LocalQuadExt::RamifiedUnit: return "ram-unit";
        case LocalQuadExt::RamifiedPrime: return "ram-prime";
        case LocalQuadExt::Sqrt3: return "sqrt3";
        case LocalQuadExt::Sqrt7: return "sqrt7";
        case LocalQuadExt::Sqrt2: return "sqrt2";
        case LocalQuadExt::Sqrt6: return "sqrt6";
        case LocalQuadExt::Sqrt10: return "sqrt10";
        case LocalQuadExt::Sqrt14: return "sqrt14";
    }
    return "?";
}

const char* splitting_name(SplittingType s) {
    switch (s) {
        case SplittingType::Split: return "split";
        case SplittingType::Inert: return "inert";
        case SplittingType::Ramified: return "ramified";
    }
    return "?";
}

bool is_fundamental_discriminant(std::int64_t d) {
    if (d >= 0) return false;
    auto squarefree = [](std::int64_t n) {
        n = std::llabs(n);
        for (std::int64_t q = 2; q * q <= n; ++q) {
            if (n % (q * q) == 0) return false;
        }
        return true;
    };
    std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree(d);
    if (r == 0) {
        std::int64_t m = d / 4;
        std::int64_t rm = ((m % 4) + 4) % 4;
        return squarefree(m) && (rm == 2 || rm == 3);
    }
    return false;
}

QuadOrder::QuadOrder(std::int64_t fundamental_disc, std::int64_t c)
    : disc(fundamental_disc), conductor(c) {
    if (!is_fundamental_discriminant(disc))
        throw std::invalid_argument("QuadOrder: discriminant is not a negative fundamental discriminant");
    if (conductor < 1) throw std::invalid_argument("QuadOrder: conductor must be >= 1");
}

int kronecker_symbol(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        std::int64_t a8 = ((a % 8) + 8) % 8;
        while (n % 2 == 0) {
            n /= 2;
            if (a8 == 3 || a8 == 5) result = -result;
        }
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

SplittingType splitting_at(const QuadOrder& k, std::int64_t p) {
    if (k.disc % p == 0) return SplittingType::Ramified;
    return kronecker_symbol(k.disc, p) == 1 ? SplittingType::Split : SplittingType::Inert;
}

int eichler_symbol(std::int64_t m, SplittingType s) {
    if (s == SplittingType::Split)
        throw std::invalid_argument("eichler_symbol: defined for field extensions; use the split +1 convention explicitly");
    if (m >= 1) return 1;
    return s == SplittingType::Inert ? -1 : 0;
}

int eichler_symbol_ext(std::int64_t m, SplittingType s) {
    if (s == SplittingType::Split) return 1;
    return eichler_symbol(m, s);
}

std::int64_t count_reduced_forms(std::int64_t disc) {
    if (disc >= 0) throw std::invalid_argument("count_reduced_forms: discriminant must be negative");
    std::int64_t r = ((disc % 4) + 4) % 4;
    if (r != 0 && r != 1) throw std::invalid_argument("count_reduced_forms: discriminant must be 0 or 1 mod 4");
    std::int64_t count = 0;
    std::int64_t babs = -disc;
    for (std::int64_t b = (r == 1) ? 1 : 0; 3 * b * b <= babs; b += 2) {
        std::int64_t m = (b * b - disc) / 4;
        for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= m; ++a) {
            if (m % a != 0) continue;
            std::int64_t c = m / a;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            count += (b > 0 && b < a && a < c) ? 2 : 1;
        }
    }
    return count;
}

std::int64_t class_number(const QuadOrder& k) {
    std::int64_t h_fund = count_reduced_forms(k.disc);
    __int128 h = h_fund;
    std::int64_t c = k.conductor;
    for (std::int64_t q = 2; q * q <= c; ++q) {
        if (c % q != 0) continue;
        int e = 0;
        while (c % q == 0) {
            c /= q;
            ++e;
        }
        h *= q - kronecker_symbol(k.disc, q);
        for (int i = 1; i < e; ++i) h *= q;
        if (h > (__int128)1 << 62) throw std::range_error("class_number: conductor too large");
    }
    if (c > 1) h *= c - kronecker_symbol(k.disc, c);
    if (k.conductor > 1) {
        if (k.disc == -3) h /= 3;
        if (k.disc == -4) h /= 2;
    }
    if (h > (__int128)1 << 62) throw std::range_error("class_number: result overflows");
    return (std::int64_t)h;
}

namespace {

// a = p^val * unit
std::pair<int, std::int64_t> split_valuation(std::int64_t a, std::int64_t p) {
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return {v, a};
}

int legendre(std::int64_t u, std::int64_t p) { return kronecker_symbol(u, p); }

int eps2(std::int64_t u) {
    std::int64_t m = ((u % 4) + 4) % 4;
    return m == 3 ? 1 : 0;
}

int omega2(std::int64_t u) {
    std::int64_t m = ((u % 8) + 8) % 8;
    return (m == 3 || m == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(std::int64_t a, std::int64_t b, std::int64_t p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    if (p < 2) throw std::invalid_argument("hilbert_symbol: p must be a prime");
    auto [alpha, u] = split_valuation(a, p);
    auto [beta, v] = split_valuation(b, p);
    if (p == 2) {
        int e = eps2(u) * eps2(v) + alpha * omega2(v) + beta * omega2(u);
        return (e & 1) ? -1 : 1;
    }
    int sign = 1;
    if ((alpha & 1) && (beta & 1) && ((p - 1) / 2) % 2 == 1) sign = -sign;
    if (beta & 1) sign *= legendre(u, p);
    if (alpha & 1) sign *= legendre(v, p);
    return sign;
}

int hilbert_symbol_inf(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol_inf: arguments must be nonzero");
    return (a < 0 && b < 0) ? -1 : 1;
}

std::optional<LocalQuadExt> local_quad_class(const QuadOrder& k, std::int64_t p) {
    std::int64_t d = k.disc;
    if (p == 2) {
        auto [alpha, u] = split_valuation(d, 2);
        std::int64_t m8 = ((u % 8) + 8) % 8;
        if (alpha % 2 == 0) {
            switch (m8) {
                case 1: return std::nullopt;
                case 5: return LocalQuadExt::Unramified;
                case 3: return LocalQuadExt::Sqrt3;
                default: return LocalQuadExt::Sqrt7;
            }
        }
        switch (m8) {
            case 1: return LocalQuadExt::Sqrt2;
            case 3: return LocalQuadExt::Sqrt6;
            case 5: return LocalQuadExt::Sqrt10;
            default: return LocalQuadExt::Sqrt14;
        }
    }
    auto [alpha, u] = split_valuation(d, p);
    if (alpha % 2 == 0) {
        int ls = legendre(u, p);
        if (ls == 1) return std::nullopt;
        return LocalQuadExt::Unramified;
    }
    return legendre(u, p) == 1 ? LocalQuadExt::RamifiedPrime : LocalQuadExt::RamifiedUnit;
}

}  // namespace heegner
