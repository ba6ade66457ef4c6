#include <doctest.h>

#include <random>

#include "fraclip/params.hpp"

using namespace fraclip;

TEST_CASE("aggregate exponent") {
    CHECK(aggregate_exponent({Exponent::one(), Exponent::infinity()}) == doctest::Approx(1.0));
    CHECK(aggregate_exponent({Exponent::from_value(2), Exponent::from_value(2)}) ==
          doctest::Approx(1.0));
    CHECK(aggregate_exponent({Exponent::from_value(3), Exponent::from_value(3),
                              Exponent::from_value(3)}) == doctest::Approx(1.0));
    CHECK(std::isinf(aggregate_exponent({Exponent::infinity(), Exponent::infinity()})));

    CHECK_THROWS_AS(Exponent::from_value(0.5), std::invalid_argument);
    CHECK_THROWS_AS(aggregate_exponent({}), std::invalid_argument);
}

TEST_CASE("aggregate exponent is symmetric and monotone") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Exponent> p{Exponent::from_value(u(rng)), Exponent::from_value(u(rng)),
                                Exponent::from_value(u(rng))};
        std::vector<Exponent> q{p[2], p[0], p[1]};
        CHECK(aggregate_exponent(p) == doctest::Approx(aggregate_exponent(q)).epsilon(1e-14));

        std::vector<Exponent> larger = p;
        larger[trial % 3] = Exponent::from_value(larger[trial % 3].value() * 1.5);
        CHECK(aggregate_exponent(larger) > aggregate_exponent(p));
    }
}

TEST_CASE("conjugate exponents") {
    CHECK(Exponent::one().conjugate().is_infinite());
    CHECK(Exponent::infinity().conjugate().is_one());
    CHECK(Exponent::from_value(2).conjugate().value() == doctest::Approx(2.0));
    CHECK(Exponent::from_value(4).conjugate().value() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("order splits") {
    CHECK(equal_order_split(1.0, 2, 1) == std::vector<double>{0.5, 0.5});
    CHECK(equal_order_split(1.5, 2, 1) == std::vector<double>{0.75, 0.75});
    CHECK_NOTHROW(validate_order_split({0.9, 0.6}, 1.5, 1));
    CHECK_THROWS_AS(validate_order_split({1.0, 0.5}, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(validate_order_split({0.5, 0.5}, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(equal_order_split(2.5, 2, 1), std::invalid_argument);
}

TEST_CASE("params hold the index partition") {
    auto prm = FracParams::make(1, 3, 1.0, 0.0,
                                {Exponent::one(), Exponent::from_value(2), Exponent::infinity()});
    CHECK(prm.unit_idx == std::vector<std::size_t>{0});
    CHECK(prm.dual_idx == std::vector<std::size_t>{1, 2});
    CHECK(prm.m1() + prm.m2() == 3);
    CHECK(prm.p_recip == doctest::Approx(1.5));
    CHECK(prm.n_over_p() == doctest::Approx(1.5));
    CHECK(prm.standard_range());
}

TEST_CASE("kernel exponents carry both families") {
    auto prm = FracParams::make(1, 2, 0.5, 0.0, {Exponent::from_value(2), Exponent::from_value(2)});
    auto ke = KernelExponents::from(prm);
    CHECK(ke.kernel_decay[0] == doctest::Approx(1.0 - 0.25 + 0.5));
    CHECK(ke.recipe_shift[0] == doctest::Approx(0.5 + 0.25));
    // recipe_shift = kernel_decay - n/p_i' under the equal split
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(ke.recipe_shift[i] ==
              doctest::Approx(ke.kernel_decay[i] - prm.n * prm.p_vec[i].conjugate().reciprocal()));
    // decay exponents exceed 1/m on the standard range
    for (double th : ke.kernel_decay) CHECK(th > 1.0 / prm.m);
}

TEST_CASE("region classification") {
    auto mk = [](int n, double p, double gamma, double delta) {
        return FracParams::make(n, 2, gamma, delta,
                                {Exponent::from_value(2 * p), Exponent::from_value(2 * p)});
    };
    CHECK(classify_region(mk(1, 2, 1.0, 0.4)) == Region::admissible);
    CHECK(classify_region(mk(1, 2, 1.5, 1.0)) == Region::excluded_corner);
    CHECK(classify_region(mk(1, 2, 1.5, 2.0)) == Region::trivial);
    // boundary tie is admissible
    CHECK(classify_region(mk(1, 2, 1.0, 0.5)) == Region::admissible);

    // classification depends on (n, p) only through n/p
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int trial = 0; trial < 100; ++trial) {
        const double inv_p = u(rng);
        const double gamma = 0.3 + u(rng);
        const double delta = -1.0 + 2.0 * u(rng);
        const Region a = classify_region(delta, gamma - 1.0 * inv_p);
        auto prm1 = FracParams::make(1, 2, gamma, delta,
                                     {Exponent::from_value(2.0 / inv_p),
                                      Exponent::from_value(2.0 / inv_p)});
        auto prm2 = FracParams::make(2, 2, gamma, delta,
                                     {Exponent::from_value(4.0 / inv_p),
                                      Exponent::from_value(4.0 / inv_p)});
        CHECK(classify_region(prm1) == a);
        CHECK(classify_region(prm2) == a);  // n doubled, every p_i doubled: same n/p
    }
}

TEST_CASE("relaxed order range is accepted, strict range is flagged") {
    auto prm = FracParams::make(1, 1, 1.25, 0.75, {Exponent::from_value(2)});
    CHECK_FALSE(prm.standard_range());
    CHECK(KernelExponents::from(prm).kernel_decay[0] == doctest::Approx(0.75));
    CHECK_THROWS_AS(FracParams::make(1, 1, 2.5, 0.0, {Exponent::from_value(2)}),
                    std::invalid_argument);
}
