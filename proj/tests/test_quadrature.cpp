#include <doctest.h>

#include "fraclip/quadrature.hpp"
#include "oracles.hpp"

using namespace fraclip;

TEST_CASE("gauss rules integrate polynomials exactly") {
    for (int order : {4, 8, 16, 32}) {
        const GaussRule& rule = gauss_rule(order);
        double wsum = 0.0;
        for (double w : rule.w) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        // x^(2N-1) is odd -> 0; x^(2N-2) has a known value
        const int k = 2 * order - 2;
        const double got = integrate_rule([&](double x) { return std::pow(x, k); }, -1.0, 1.0, rule);
        CHECK(got == doctest::Approx(2.0 / (k + 1)).epsilon(1e-12));
    }
}

TEST_CASE("endpoint substitution handles algebraic singularities") {
    const GaussRule& rule = gauss_rule(16);
    CHECK(integrate_endpoint([](double x) { return std::pow(x, -0.5); }, 0.0, 1.0, -0.5, true,
                             rule) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_endpoint([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, -0.9, true,
                             rule) == doctest::Approx(10.0).epsilon(1e-10));
    // blow-up right endpoint anchored at 0 (see the helper's contract)
    CHECK(integrate_endpoint([](double x) { return std::pow(-x, -0.3); }, -1.0, 0.0, -0.3,
                             false, rule) == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
    // vanishing endpoints may sit anywhere
    CHECK(integrate_endpoint([](double x) { return std::sqrt(1.0 - x); }, 0.0, 1.0, 0.5, false,
                             rule) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(integrate_endpoint([](double x) { return std::log(x); }, 0.0, 1.0, -0.1, true, rule) ==
          doctest::Approx(-1.0).epsilon(1e-10));
    CHECK_THROWS_AS(integrate_endpoint([](double x) { return x; }, 0.0, 1.0, -1.0, true, rule),
                    divergence_error);
}

TEST_CASE("smooth and adaptive integration agree with the oracle") {
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    const double want = oracles::integrate(f, 0.0, 4.0, 1e-12);
    CHECK(integrate_smooth(f, 0.0, 4.0, gauss_rule(16), 6) ==
          doctest::Approx(want).epsilon(1e-12));
    CHECK(integrate_adaptive(f, 0.0, 4.0, 1e-12) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("stable summation") {
    StableSum s;
    s.add(1e30);
    s.add(1e-3);
    s.add(-1e30);
    CHECK(s.get() == doctest::Approx(1e-3).epsilon(1e-12));

    StableSum t;
    t.add(1.0);
    t.add(std::numeric_limits<double>::infinity());
    t.add(1.0);
    CHECK(std::isinf(t.get()));
}
