#include <doctest.h>

#include <random>

#include "fraclip/weights.hpp"
#include "oracles.hpp"

using namespace fraclip;

TEST_CASE("ball integrals of power weights, closed forms") {
    CHECK(ball_integral_power(0.0, Ball::radial(0.4, 2.5, 1)) == doctest::Approx(5.0));
    CHECK(ball_integral_power(1.0, Ball::radial(3.0, 1.0, 1)) == doctest::Approx(6.0));
    CHECK(ball_integral_power(-0.5, Ball::radial(0.0, 1.0, 1)) == doctest::Approx(4.0));
    CHECK_THROWS_AS(ball_integral_power(-1.0, Ball::radial(0.0, 1.0, 1)), divergence_error);
    CHECK_THROWS_AS(ball_integral_power(-1.2, Ball::radial(0.5, 1.0, 1)), divergence_error);
    // away from the origin even a <= -n is finite
    CHECK(ball_integral_power(-1.0, Ball::radial(3.0, 1.0, 1)) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("ball integrals match an independent adaptive oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = -0.95 + 2.5 * u(rng);
        const double rho = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const double R = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const Ball b = Ball::radial(rho, R, 1);
        auto f = [&](double y) { return std::pow(std::abs(y), a); };
        const double want =
            oracles::integrate_singular(f, rho - R, rho + R, {0.0}, 1e-11 * std::max(1.0, R));
        const double got = ball_integral_power(a, b);
        CHECK(got == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("ball integrals in the plane match a Cartesian oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const double a = -1.4 + 2.4 * u(rng);
        const double rho = 0.2 + 2.0 * u(rng);
        const double R = 0.3 + 1.5 * u(rng);
        const Ball b = Ball::radial(rho, R, 2);
        auto f = [&](double x, double y) {
            if ((x - rho) * (x - rho) + y * y >= R * R) return 0.0;
            const double r = std::hypot(x, y);
            return r == 0.0 ? 0.0 : std::pow(r, a);
        };
        const double want = oracles::integrate2(f, rho - R, rho + R, -R, R, 2e-6);
        CHECK(ball_integral_power(a, b) == doctest::Approx(want).epsilon(2e-4));
    }
}

TEST_CASE("envelope examples and two-sided comparability") {
    CHECK(power_ball_envelope(1.0, Ball::radial(3.0, 1.0, 1)) == doctest::Approx(3.0));
    CHECK(ball_integral_power(1.0, Ball::radial(3.0, 1.0, 1)) /
              power_ball_envelope(1.0, Ball::radial(3.0, 1.0, 1)) ==
          doctest::Approx(2.0));
    CHECK(power_ball_envelope(0.0, Ball::radial(9.0, 4.0, 1)) == doctest::Approx(4.0));
    CHECK(power_ball_envelope(-0.5, Ball::radial(0.0, 1.0, 1)) == doctest::Approx(1.0));
    CHECK(ball_integral_power(-0.5, Ball::radial(0.0, 1.0, 1)) == doctest::Approx(4.0));

    // exact scale invariance of the ratio
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {1, 2}) {
        for (int trial = 0; trial < 40; ++trial) {
            const double a = -0.9 * n + (n + 1.5) * u(rng);
            const double rho = std::pow(10.0, -3.0 + 6.0 * u(rng));
            const double R = std::pow(10.0, -3.0 + 6.0 * u(rng));
            const double lam = 211.7;
            const double r1 = ball_integral_power(a, Ball::radial(rho, R, n)) /
                              power_ball_envelope(a, Ball::radial(rho, R, n));
            const double r2 = ball_integral_power(a, Ball::radial(lam * rho, lam * R, n)) /
                              power_ball_envelope(a, Ball::radial(lam * rho, lam * R, n));
            CHECK(r2 == doctest::Approx(r1).epsilon(1e-9));
        }
    }
}

TEST_CASE("reverse Hoelder and doubling classifications") {
    CHECK(reverse_holder_infty_holds(0.0, 1));
    CHECK(reverse_holder_infty_holds(1.0, 1));
    CHECK_FALSE(reverse_holder_infty_holds(-0.5, 1));

    CHECK(is_doubling_power(0.0, 1));
    CHECK(is_doubling_power(-0.9, 1));
    CHECK_FALSE(is_doubling_power(-1.0, 1));
    // constant weight: doubling constant exactly 2^n
    CHECK(doubling_ratio_sweep(0.0, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(doubling_ratio_sweep(0.0, 2) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(doubling_ratio_sweep(-0.9, 1) < 25.0);

    CHECK(reverse_holder_holds(0.0, 2.0, 1));
    CHECK(reverse_holder_holds(-0.4, 2.0, 1));
    CHECK_FALSE(reverse_holder_holds(-0.6, 2.0, 1));
    CHECK_THROWS_AS(reverse_holder_holds(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("numeric sup/avg sweeps match the RH_inf classification") {
    // a >= 0: sup over B(0,R)-style balls comparable to the average;
    // a < 0: the ratio diverges as the grid refines toward the origin.
    auto ratio = [](double a, double rho, double R) {
        const Ball b = Ball::radial(rho, R, 1);
        const double sup = sup_power_on_range(a, radius_range_ball(rho, R));
        return sup * b.volume() / ball_integral_power(a, b);
    };
    double worst = 0.0;
    for (double rho : {0.0, 0.3, 2.0, 50.0})
        for (double R : {0.01, 1.0, 100.0}) worst = std::max(worst, ratio(1.0, rho, R));
    CHECK(worst < 10.0);
    CHECK(std::isinf(ratio(-0.5, 0.0, 1.0)));
    CHECK(ratio(-0.5, 2.0, 1.9) > ratio(-0.5, 2.0, 1.0));
}

TEST_CASE("tabulated weights approximate their power counterparts") {
    std::vector<std::array<double, 2>> samples;
    for (int i = 0; i <= 200; ++i) {
        const double r = std::pow(10.0, -6.0 + 12.0 * i / 200.0);
        samples.push_back({r, std::pow(r, 0.3)});
    }
    const Weight tab = Weight::tabulated(samples);
    CHECK(tab.approximate());
    CHECK_FALSE(Weight::power(0.3).approximate());
    CHECK(tab.exponent_near_zero() == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(tab.exponent_at_infinity() == doctest::Approx(0.3).epsilon(1e-9));
    const Ball b = Ball::radial(0.7, 1.3, 1);
    CHECK(weight_pow_ball_integral(tab, -1.0, b) ==
          doctest::Approx(ball_integral_power(-0.3, b)).epsilon(1e-3));
}

TEST_CASE("member-pair recipe, frozen case") {
    auto prm = FracParams::make(1, 2, 0.5, -2.0, {Exponent::from_value(2), Exponent::from_value(2)});
    const RecipePair rp = construct_member_pair(prm);
    CHECK(rp.beta[0] == doctest::Approx(0.25));
    CHECK(rp.beta[1] == doctest::Approx(0.25));
    CHECK(rp.nu == doctest::Approx(0.5));
    CHECK(rp.alpha == doctest::Approx(-1.0));  // delta + sum beta + n/p - gamma
    CHECK(rp.alpha < prm.delta + prm.m * prm.n - prm.gamma);
    CHECK(rp.pair.w.power_exponent() == doctest::Approx(-1.0));
}

TEST_CASE("member-pair recipe, unit-exponent slot") {
    auto prm = FracParams::make(1, 2, 0.5, -2.0, {Exponent::one(), Exponent::from_value(2)});
    const RecipePair rp = construct_member_pair(prm);
    CHECK(rp.beta_unit > 0.0);
    CHECK(rp.beta[0] == doctest::Approx(-rp.beta_unit));
    // v_i^{-1} = |x|^{beta_unit} on the unit slot passes RH_inf
    CHECK(reverse_holder_infty_holds(-rp.pair.v[0].power_exponent(), prm.n));
    CHECK(rp.alpha == doctest::Approx(-0.875));
}

TEST_CASE("recipe outputs satisfy the class prechecks across parameters") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 1 + static_cast<int>(u(rng) * 3);
        std::vector<Exponent> pv;
        int m2 = 0;
        for (int i = 0; i < m; ++i) {
            if (u(rng) < 0.3 && i > 0) {
                pv.push_back(Exponent::one());
            } else {
                pv.push_back(Exponent::from_value(1.2 + 4.0 * u(rng)));
                ++m2;
            }
        }
        if (m2 == 0) continue;
        const double gamma = 0.2 + (m - 0.3) * u(rng);
        const double delta = gamma - m - 0.2 - 2.0 * u(rng);  // < gamma - m n, n = 1
        auto prm = FracParams::make(1, m, gamma, delta, pv);
        const RecipePair rp = construct_member_pair(prm, 0.2 + 0.6 * u(rng));
        CHECK(rp.alpha < 0.0);
        CHECK(rp.alpha < prm.delta + prm.m * prm.n - prm.gamma);
        for (std::size_t i : prm.unit_idx)
            CHECK(reverse_holder_infty_holds(-rp.pair.v[i].power_exponent(), prm.n));
        for (std::size_t i : prm.dual_idx) {
            const double s = rp.pair.v[i].power_exponent() * prm.p_vec[i].conjugate().value();
            CHECK(is_doubling_power(-s, prm.n));
        }
        // w^{-1} locally integrable since alpha < 0
        CHECK(std::isfinite(ball_integral_power(-rp.alpha, Ball::radial(0.0, 1.0, 1))));
    }
}

TEST_CASE("recipe rejects out-of-range requests") {
    auto prm = FracParams::make(1, 2, 0.5, -1.0, {Exponent::from_value(2), Exponent::from_value(2)});
    CHECK_THROWS_AS(construct_member_pair(prm), std::domain_error);  // delta >= gamma - mn
    auto ones = FracParams::make(1, 2, 0.5, -2.0, {Exponent::one(), Exponent::one()});
    CHECK_THROWS_AS(construct_member_pair(ones), std::domain_error);
}
