#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/localdata.hpp"

using namespace heegner;

namespace {

const LocalQuadExt odd_classes[] = {LocalQuadExt::Unramified, LocalQuadExt::RamifiedUnit,
                                    LocalQuadExt::RamifiedPrime};
const LocalQuadExt two_classes[] = {LocalQuadExt::Unramified, LocalQuadExt::Sqrt3, LocalQuadExt::Sqrt7,
                                    LocalQuadExt::Sqrt2,      LocalQuadExt::Sqrt6, LocalQuadExt::Sqrt10,
                                    LocalQuadExt::Sqrt14};

}  // namespace

TEST_CASE("t symbol") {
    CHECK(t_symbol(LocalQuadExt::Unramified) == -1);
    CHECK(t_symbol(LocalQuadExt::RamifiedUnit) == 0);
    CHECK(t_symbol(LocalQuadExt::RamifiedPrime) == 0);
    CHECK(t_symbol(LocalQuadExt::Sqrt7) == 1);
    CHECK(t_symbol(LocalQuadExt::Sqrt10) == 2);
}

TEST_CASE("mu symbol values") {
    CHECK(mu_symbol(LocalQuadExt::Sqrt3, LocalQuadExt::Sqrt3) == mu_infinity);
    CHECK(mu_symbol(LocalQuadExt::Sqrt3, LocalQuadExt::Sqrt10) == 3);
    CHECK(mu_symbol(LocalQuadExt::Sqrt2, LocalQuadExt::Sqrt14) == 5);
    CHECK(mu_symbol(LocalQuadExt::Unramified, LocalQuadExt::Sqrt6) == 1);
    CHECK(mu_symbol(LocalQuadExt::RamifiedUnit, LocalQuadExt::RamifiedPrime) == 2);
    CHECK(mu_symbol(LocalQuadExt::Sqrt3, LocalQuadExt::Sqrt7) == 3);
}

TEST_CASE("mu symbol is symmetric on all class pairs") {
    for (auto a : two_classes)
        for (auto b : two_classes) CHECK(mu_symbol(a, b) == mu_symbol(b, a));
    for (auto a : odd_classes)
        for (auto b : odd_classes) CHECK(mu_symbol(a, b) == mu_symbol(b, a));
}

TEST_CASE("lift level classification") {
    auto d = jl_local_level(5, 2);
    REQUIRE(d.l_classes.size() == 2);
    CHECK(d.l_classes[0] == LocalQuadExt::RamifiedUnit);
    CHECK(d.l_classes[1] == LocalQuadExt::RamifiedPrime);
    CHECK(d.n == 2);

    d = jl_local_level(2, 2);
    REQUIRE(d.l_classes.size() == 2);
    CHECK(d.l_classes[0] == LocalQuadExt::Sqrt3);
    CHECK(d.l_classes[1] == LocalQuadExt::Sqrt7);

    d = jl_local_level(2, 1);
    CHECK(d.l_classes == std::vector<LocalQuadExt>{LocalQuadExt::Unramified});
    CHECK(d.n == 1);

    CHECK_THROWS_AS(jl_local_level(2, 4), std::invalid_argument);
    CHECK_THROWS_AS(jl_local_level(2, 6), std::invalid_argument);
}

TEST_CASE("lift level parity law: n odd iff every class unramified") {
    for (std::int64_t p : {2, 3, 5, 7, 11}) {
        for (unsigned s = 1; s <= 5; ++s) {
            if (p == 2 && s % 2 == 0 && s >= 4) continue;
            auto d = jl_local_level(p, s);
            for (auto l : d.l_classes) CHECK((d.n % 2 == 1) == !is_ramified_class(l));
        }
    }
}

TEST_CASE("default local types") {
    auto r = default_rep_type(7, 1);
    CHECK(r.kind == RepKind::Steinberg);
    CHECK(r.steinberg_twist == 0);
    CHECK(r.n == 1);

    r = default_rep_type(3, 4);
    CHECK(r.kind == RepKind::Supercuspidal);
    CHECK(r.inducing == LocalQuadExt::Unramified);
    CHECK(r.psi_conductor == 2);

    r = default_rep_type(3, 3);
    CHECK(r.kind == RepKind::Supercuspidal);
    CHECK(is_ramified_class(r.inducing));
    CHECK(r.psi_conductor == 2);

    r = default_rep_type(5, 2);
    CHECK(r.kind == RepKind::Supercuspidal);
    CHECK(r.override_recommended);  // twisted Steinberg also has n = 2 at odd p

    r = default_rep_type(2, 7);
    CHECK(r.exceptional);
    CHECK(r.minimal);

    CHECK_THROWS_AS(default_rep_type(5, 3), std::invalid_argument);
    CHECK_THROWS_AS(default_rep_type(3, 6), std::invalid_argument);
    CHECK_THROWS_AS(default_rep_type(2, 9), std::invalid_argument);
}

TEST_CASE("n is preserved by default types") {
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        unsigned max_n = p >= 5 ? 2 : (p == 3 ? 5 : 8);
        for (unsigned n = 0; n <= max_n; ++n) CHECK(default_rep_type(p, n).n == n);
    }
}

TEST_CASE("rep invariants") {
    CHECK(LocalRepType::steinberg(3, 1).n == 2);
    CHECK(LocalRepType::steinberg(2, 2).n == 4);
    CHECK(LocalRepType::steinberg(2, 3).n == 6);
    CHECK_THROWS_AS(LocalRepType::steinberg(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(LocalRepType::steinberg(3, 2), std::invalid_argument);
    CHECK(LocalRepType::supercuspidal(3, LocalQuadExt::RamifiedUnit, 2).n == 3);
    CHECK(LocalRepType::supercuspidal(2, LocalQuadExt::Sqrt3, 3).n == 5);
    CHECK(LocalRepType::supercuspidal(2, LocalQuadExt::Sqrt2, 2).n == 5);
    CHECK_THROWS_AS(LocalRepType::supercuspidal(5, LocalQuadExt::RamifiedUnit, 2), std::invalid_argument);
    CHECK_THROWS_AS(LocalRepType::supercuspidal(3, LocalQuadExt::Sqrt3, 1), std::invalid_argument);
}

TEST_CASE("lift multiplicity") {
    CHECK(jl_multiplicity(1) == 1);
    CHECK(jl_multiplicity(2) == 2);
    CHECK_THROWS_AS(jl_multiplicity(3), std::invalid_argument);
    CHECK_THROWS_AS(jl_multiplicity(0), std::invalid_argument);
}
