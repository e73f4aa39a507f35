#include <doctest.h>

#include "qwalk/fusion.hpp"

using namespace qwalk;

TEST_CASE("q_number values") {
    CHECK(q_number(1, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_number(1, 0.8) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q_number(2, 0.5) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(q_number(3, 0.5) == doctest::Approx(5.25).epsilon(1e-14));
    CHECK(q_number(0, 0.5) == 0.0);
    CHECK(q_number(-3, 0.5) == doctest::Approx(-5.25).epsilon(1e-14));
}

TEST_CASE("q_pochhammer products") {
    CHECK(q_pochhammer(0.3, 0.5, 0) == 1.0);
    CHECK(q_pochhammer(0.3, 0.5, 1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(q_pochhammer(0.3, 0.5, 3) ==
          doctest::Approx(0.7 * 0.85 * 0.925).epsilon(1e-14));
    CHECK_THROWS_AS(q_pochhammer(0.3, 0.5, -1), input_error);
}

TEST_CASE("q_binomial values and domain") {
    CHECK(q_binomial(0, 0, 0.25) == doctest::Approx(1.0));
    CHECK(q_binomial(2, 1, 0.25) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(q_binomial(2, 2, 0.25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(q_binomial(2, 3, 0.25), input_error);
    CHECK_THROWS_AS(q_binomial(2, -1, 0.25), input_error);
}

TEST_CASE("fusion rule") {
    const auto half_half = fuse_labels({1}, {1});
    REQUIRE(half_half.size() == 2);
    CHECK(half_half[0].twice_spin == 0);
    CHECK(half_half[1].twice_spin == 2);

    const auto with_unit = fuse_labels({0}, {7});
    REQUIRE(with_unit.size() == 1);
    CHECK(with_unit[0].twice_spin == 7);

    const auto half_one = fuse_labels({1}, {2});
    REQUIRE(half_one.size() == 2);
    CHECK(half_one[0].twice_spin == 1);
    CHECK(half_one[1].twice_spin == 3);

    CHECK(fusion_allowed({1}, {1}, {2}));
    CHECK_FALSE(fusion_allowed({1}, {1}, {1}));
    CHECK_FALSE(fusion_allowed({1}, {1}, {4}));
}

TEST_CASE("weight map validation") {
    CHECK_THROWS_AS(WeightFunctional({{1, -0.5}}), input_error);
    CHECK_THROWS_AS(WeightFunctional({{1, 0.7}, {2, 0.7}}), input_error);
    const WeightFunctional merged({{1, 0.6}, {1, 0.4}});
    CHECK(merged.weight({1}) == doctest::Approx(1.0));
    CHECK(merged.entries().size() == 1);
}

TEST_CASE("weight_product") {
    const double q = 0.5;
    const auto half = WeightFunctional::point(1);

    SUBCASE("square of the fundamental state") {
        const auto sq = weight_product(half, half, q);
        CHECK(sq.weight({0}) == doctest::Approx(0.16).epsilon(1e-13));
        CHECK(sq.weight({2}) == doctest::Approx(0.84).epsilon(1e-13));
    }
    SUBCASE("counit is the unit") {
        const WeightFunctional psi({{1, 0.25}, {4, 0.5}});
        const auto prod = weight_product(WeightFunctional::counit(), psi, q);
        for (int s2 = 0; s2 <= 4; ++s2)
            CHECK(prod.weight({s2}) == doctest::Approx(psi.weight({s2})).epsilon(1e-14));
    }
    SUBCASE("norm multiplies") {
        const WeightFunctional a({{1, 0.5}, {2, 0.5}});
        const WeightFunctional b({{3, 1.0}});
        CHECK(weight_product(a, b, q).norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("check_dual is the identity on weights") {
    const WeightFunctional mixed({{2, 0.5}, {4, 0.5}});
    const auto dual = check_dual(mixed);
    CHECK(dual.weight({2}) == doctest::Approx(0.5));
    CHECK(dual.weight({4}) == doctest::Approx(0.5));
    CHECK(check_dual(WeightFunctional()).empty());
    CHECK(check_dual(WeightFunctional::point(1)).weight({1}) == doctest::Approx(1.0));
}

TEST_CASE("generating criterion") {
    CHECK(is_generating(WeightFunctional::point(1)));
    CHECK_FALSE(is_generating(WeightFunctional::point(2)));
    CHECK_FALSE(is_generating(WeightFunctional::counit()));
    CHECK(is_generating(WeightFunctional({{2, 0.5}, {3, 0.5}})));
}

TEST_CASE("quantum dimension exceeds classical dimension") {
    for (double q : {0.3, 0.5, 0.8})
        for (int s2 = 1; s2 <= 12; ++s2) CHECK(quantum_dim({s2}, q) > IrrepLabel{s2}.dim());
}
