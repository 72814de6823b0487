#include "heegner/embedtables.hpp"

#include <stdexcept>

#include "heegner/localdata.hpp"

namespace heegner {

void OrderType::validate() const {
    for (auto& [p, e] : eichler) {
        if (e == 0) throw std::invalid_argument("OrderType: zero Eichler exponent");
        if (cartan.count(p) || division.count(p))
            throw std::invalid_argument("OrderType: prime supports must be disjoint");
    }
    for (auto& [p, e] : cartan) {
        if (e == 0) throw std::invalid_argument("OrderType: zero Cartan exponent");
        if (division.count(p)) throw std::invalid_argument("OrderType: prime supports must be disjoint");
    }
    for (auto& [p, d] : division) {
        if (d.nu == 0) throw std::invalid_argument("OrderType: division level exponent must be >= 1");
        (void)p;
    }
    if (division.size() % 2 != 0)
        throw std::invalid_argument("OrderType: the discriminant must have an even number of prime factors");
}

std::int64_t OrderType::level() const {
    __int128 lvl = 1;
    auto mul_pow = [&lvl](std::int64_t p, unsigned e) {
        for (unsigned i = 0; i < e; ++i) {
            lvl *= p;
            if (lvl > (__int128)1 << 62) throw std::range_error("OrderType::level overflows");
        }
    };
    for (auto& [p, e] : eichler) mul_pow(p, e);
    for (auto& [p, e] : cartan) mul_pow(p, 2 * e);
    for (auto& [p, d] : division) mul_pow(p, d.nu);
    return (std::int64_t)lvl;
}

std::int64_t OrderType::delta() const {
    std::int64_t d = 1;
    for (auto& [p, datum] : division) {
        (void)datum;
        d *= p;
    }
    return d;
}

EmbeddingVerdict eichler_exists(std::int64_t m, unsigned n, SplittingType s) {
    if (m < 0) throw std::invalid_argument("eichler_exists: m must be >= 0");
    EmbeddingVerdict v;
    switch (s) {
        case SplittingType::Split:
            v.exists = true;
            v.rule_id = "eic-split";
            break;
        case SplittingType::Inert:
            v.exists = 2 * m >= (std::int64_t)n;
            v.rule_id = "eic-unram";
            break;
        case SplittingType::Ramified:
            v.exists = 2 * m >= (std::int64_t)n - 1;
            v.rule_id = "eic-ram";
            break;
    }
    if (n == 0) {
        v.count = 1;
    } else if (n == 1) {
        v.count = 1 + eichler_symbol_ext(m, s);
    }
    return v;
}

EmbeddingVerdict cartan_exists(std::int64_t m, unsigned n) {
    if (n < 1) throw std::invalid_argument("cartan_exists: level exponent must be >= 1");
    if (m < 0) throw std::invalid_argument("cartan_exists: m must be >= 0");
    EmbeddingVerdict v;
    v.exists = (m == 0);
    v.rule_id = "car-C2";
    return v;
}

namespace {

EmbeddingVerdict row(bool exists, const char* id) {
    EmbeddingVerdict v;
    v.exists = exists;
    v.rule_id = id;
    return v;
}

}  // namespace

EmbeddingVerdict division_exists(std::int64_t p, std::int64_t m, unsigned n, LocalQuadExt k_class,
                                 LocalQuadExt l_class) {
    if (n < 1) throw std::invalid_argument("division_exists: level exponent must be >= 1");
    if (m < 0) throw std::invalid_argument("division_exists: m must be >= 0");
    int tk = t_symbol(k_class);
    int tl = t_symbol(l_class);
    bool k_ram = is_ramified_class(k_class);
    bool l_ram = is_ramified_class(l_class);

    // The order with L unramified depends only on floor((n-1)/2), so even n
    // collapses to the odd level n-1.
    if (!l_ram && n % 2 == 0) {
        EmbeddingVerdict v = division_exists(p, m, n - 1, k_class, l_class);
        v.rule_id += "*";  // reached through the level collapse R_n = R_{n-1}
        return v;
    }

    if (p != 2) {
        std::int64_t rho = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
        if (n % 2 == 1 && !l_ram) {
            if (!k_ram) return row(m <= rho, "div-1a");
            return row(m == rho, "div-1b");
        }
        if (n % 2 == 0 && l_ram) {
            if (!k_ram) return row(m == rho, "div-1c");
            if (k_class != l_class) return row(m == rho - 1, "div-1d");
            return row(m <= rho - 1, "div-1e");
        }
        return row(false, "no-row");  // n odd with L ramified: not an order the catalog lists
    }

    // p = 2
    std::int64_t rho = (n % 2 == 1) ? (n - 1) / 2 : n / 2;
    if (n == 1) {
        if (!l_ram) return row(m == 0, "div-2a");
        return row(false, "no-row");
    }
    if (n % 2 == 1) {  // n >= 3 odd
        if (!l_ram) {
            if (!k_ram) return row(m <= rho, "div-2f");
            return row(m == rho, "div-2g");
        }
        return row(false, "no-row");
    }
    // n even, L ramified (L unramified was collapsed above)
    if (!k_ram) {
        if (tl == 1) return row(m == rho, "div-2b");
        return row(m == rho, "div-2h");
    }
    if (tk == 1 && tl == 1) {
        if (k_class == l_class) return row(m <= rho - 1, "div-2d");
        return row(m == rho - 1, "div-2c");
    }
    if (tk == 2 && tl == 1) return row(m == rho - 1, "div-2e");
    if (tk == 1 && tl == 2) return row(m == rho - 1, "div-2i");
    // tk == 2 && tl == 2
    if (k_class == l_class) return row(m <= rho - 1, "div-2k");
    return row(m == rho - 1 || m == rho - 2, "div-2j");
}

std::int64_t division_count_nu2(std::int64_t p, std::int64_t m, SplittingType s) {
    if (p == 2) throw std::invalid_argument("division_count_nu2: closed count only at odd p");
    if (m == 1 && s == SplittingType::Inert) return 2;
    if (m == 0 && s == SplittingType::Ramified) return p + 1;
    return 0;
}

std::optional<ComponentData> component_data(const OrderType& t) {
    t.validate();
    auto it2 = t.division.find(2);
    if (it2 != t.division.end() && it2->second.nu >= 2) return std::nullopt;
    ComponentData c;
    for (auto& [p, d] : t.division) {
        if (d.nu > 1 && is_ramified_class(d.l_class)) {
            c.primes.push_back(p);
            c.class_number *= 2;
            c.field_disc_parts.push_back((p % 4 == 1) ? p : -p);
        }
    }
    return c;
}

namespace {

std::int64_t val_at(std::int64_t n, std::int64_t p) {
    std::int64_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

std::optional<std::int64_t> heegner_count(const OrderType& t, const QuadOrder& k) {
    t.validate();
    if (!t.cartan.empty()) return std::nullopt;
    __int128 total = class_number(k);
    for (auto& [p, e] : t.eichler) {
        if (e > 1) return std::nullopt;
        std::int64_t m = val_at(k.conductor, p);
        total *= 1 + eichler_symbol_ext(m, splitting_at(k, p));
    }
    for (auto& [p, d] : t.division) {
        if (p == 2 || d.nu > 2) return std::nullopt;
        std::int64_t m = val_at(k.conductor, p);
        SplittingType s = splitting_at(k, p);
        if (d.nu == 1)
            total *= 1 - eichler_symbol_ext(m, s);
        else
            total *= division_count_nu2(p, m, s);
    }
    if (total > (__int128)1 << 62) throw std::range_error("heegner_count overflows");
    return (std::int64_t)total;
}

std::optional<std::int64_t> global_embedding_count(const OrderType& t, const QuadOrder& k) {
    auto heeg = heegner_count(t, k);
    if (!heeg) return std::nullopt;
    auto comp = component_data(t);
    if (!comp) return std::nullopt;
    std::int64_t h_r = comp->class_number;
    if (*heeg == 0) return 0;
    if (*heeg % h_r != 0)
        throw std::logic_error("global_embedding_count: total not divisible by the order class number");
    return *heeg / h_r;
}

}  // namespace heegner
