#include <doctest.h>

#include <random>

#include "fraclip/op.hpp"
#include "oracles.hpp"

using namespace fraclip;

namespace {

FracParams prm_m1() { return FracParams::make(1, 1, 0.5, 0.0, {Exponent::from_value(2)}); }
FracParams prm_m2() {
    return FracParams::make(1, 2, 1.0, 0.0, {Exponent::from_value(2), Exponent::from_value(2)});
}

}  // namespace

TEST_CASE("kernel point values and symmetry") {
    const auto p1 = prm_m1();
    std::vector<Point> y1{Point::d1(2.0)};
    CHECK(kernel(Point::d1(0.0), y1, p1) == doctest::Approx(std::pow(2.0, -0.5)));

    const auto p2 = prm_m2();
    std::vector<Point> y2{Point::d1(1.0), Point::d1(1.0)};
    CHECK(kernel(Point::d1(0.0), y2, p2) == doctest::Approx(0.5));

    std::vector<Point> ya{Point::d1(0.3), Point::d1(-1.2)};
    std::vector<Point> yb{Point::d1(-1.2), Point::d1(0.3)};
    CHECK(kernel(Point::d1(0.4), ya, p2) == kernel(Point::d1(0.4), yb, p2));

    std::vector<Point> sing{Point::d1(0.4), Point::d1(0.4)};
    CHECK_THROWS_AS(kernel(Point::d1(0.4), sing, p2), std::invalid_argument);
}

TEST_CASE("operator values against closed forms") {
    const GridFunction ind = GridFunction::indicator(-1.0, 1.0);
    {
        std::vector<GridFunction> fs{ind};
        const auto [v, err] = eval_I_with_error(fs, Point::d1(0.0), prm_m1());
        CHECK(v == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(err < 1e-6);
    }
    {
        std::vector<GridFunction> fs{ind, ind};
        const auto [v, err] = eval_I_with_error(fs, Point::d1(0.0), prm_m2());
        CHECK(v == doctest::Approx(8.0 * std::log(2.0)).epsilon(1e-9));
        CHECK(err < 1e-6);
        // cross-check against a two-dimensional quadrature oracle
        const double want = oracles::integrate2(
            [](double u, double w) {
                const double s = std::abs(u) + std::abs(w);
                return s == 0.0 ? 0.0 : 1.0 / s;
            },
            -1.0, 1.0, -1.0, 1.0, 1e-7);
        CHECK(v == doctest::Approx(want).epsilon(1e-4));
    }
}

TEST_CASE("translation covariance") {
    const double h = 0.73;
    const GridFunction f0 = GridFunction::poly(-1.0, 1.0, {1.0, 0.3, -0.1});
    const GridFunction f1 = GridFunction::poly(-1.0 + h, 1.0 + h, {1.0, 0.3, -0.1});
    std::vector<GridFunction> a{f0, f0}, b{f1, f1};
    const auto prm = prm_m2();
    const double va = eval_I(a, Point::d1(0.2), prm);
    const double vb = eval_I(b, Point::d1(0.2 + h), prm);
    CHECK(vb == doctest::Approx(va).epsilon(1e-9));
}

TEST_CASE("multilinearity and positivity") {
    const auto prm = prm_m2();
    const GridFunction f = GridFunction::poly(-1.0, 1.0, {0.8, 0.2});
    const GridFunction g = GridFunction::poly(-1.0, 1.0, {0.5, -0.1, 0.1});
    const GridFunction fg = GridFunction::poly(-1.0, 1.0, {1.3, 0.1, 0.1});
    const GridFunction f2 = GridFunction::poly(-1.0, 1.0, {1.6, 0.4});
    std::vector<GridFunction> a{f, g}, b{g, g}, c{fg, g}, d{f2, g};
    const Point x = Point::d1(0.3);
    const double va = eval_I(a, x, prm), vb = eval_I(b, x, prm);
    CHECK(eval_I(c, x, prm) == doctest::Approx(va + vb).epsilon(1e-13));
    CHECK(eval_I(d, x, prm) == doctest::Approx(2.0 * va).epsilon(1e-13));
    CHECK(va > 0.0);
}

TEST_CASE("quadrature refinement stays inside the tolerance budget") {
    const auto prm = prm_m2();
    std::vector<GridFunction> fs{GridFunction::poly(-1.5, 0.5, {0.7, 0.2, 0.1}),
                                 GridFunction::poly(-0.5, 1.5, {0.9, -0.2})};
    for (double x : {-0.3, 0.1, 0.8}) {
        const auto [v, err] = eval_I_with_error(fs, Point::d1(x), prm);
        CHECK(err < 1e-4);
        (void)v;
    }
}

TEST_CASE("desk-scale caps are enforced") {
    std::vector<GridFunction> fs(3, GridFunction::indicator(-1.0, 1.0));
    auto prm = FracParams::make(2, 3, 1.0, 0.0,
                                {Exponent::from_value(2), Exponent::from_value(2),
                                 Exponent::from_value(2)});
    CHECK_THROWS_AS(eval_I(fs, Point::d2(0.0, 0.0), prm), desk_scale_error);

    // m = 3 on the line stays inside the caps
    auto prm3 = FracParams::make(1, 3, 1.5, 0.0,
                                 {Exponent::from_value(2), Exponent::from_value(2),
                                  Exponent::from_value(2)});
    OperatorQuad q;
    q.sing_panels = 6;
    q.smooth_panels = 2;
    const double v = eval_I(fs, Point::d1(0.1), prm3, q);
    CHECK(v > 0.0);
    CHECK(std::isfinite(v));
}

TEST_CASE("operator in the plane against a Cartesian oracle") {
    auto prm = FracParams::make(2, 1, 1.2, 0.0, {Exponent::from_value(2)});
    std::vector<GridFunction> fs{GridFunction::indicator2({-1.0, -1.0}, {1.0, 1.0})};
    const Point x = Point::d2(0.2, -0.1);
    const double got = eval_I(fs, x, prm);
    const double want = oracles::integrate2(
        [&](double u, double v) {
            const double d = std::hypot(u - 0.2, v + 0.1);
            return d == 0.0 ? 0.0 : std::pow(d, 1.2 - 2.0);
        },
        -1.0, 1.0, -1.0, 1.0, 1e-6);
    CHECK(got == doctest::Approx(want).epsilon(2e-4));
}

TEST_CASE("normalized operator and the ball decomposition") {
    const auto prm = prm_m2();
    const GridFunction ind = GridFunction::indicator(-1.0, 1.0);
    std::vector<GridFunction> fs{ind, ind};

    // a_B vanishes when x_B = 0 and 2B is the unit ball
    CHECK(ball_offset(fs, Ball(Point::d1(0.0), 0.5), prm) == doctest::Approx(0.0));

    // J - I is a constant in x
    const double d1 = eval_J(fs, Point::d1(-0.4), prm) - eval_I(fs, Point::d1(-0.4), prm);
    const double d2 = eval_J(fs, Point::d1(0.1), prm) - eval_I(fs, Point::d1(0.1), prm);
    const double d3 = eval_J(fs, Point::d1(0.6), prm) - eval_I(fs, Point::d1(0.6), prm);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-5));
    CHECK(d2 == doctest::Approx(d3).epsilon(1e-5));

    // J = a_B + I(decomposition) pointwise
    const Ball b(Point::d1(0.3), 0.7);
    const double aB = ball_offset(fs, b, prm);
    for (double x : {-0.2, 0.2, 0.5}) {
        const double J = eval_J(fs, Point::d1(x), prm);
        const double I = decomposition_I(fs, Point::d1(x), b, prm);
        CHECK(J == doctest::Approx(aB + I).epsilon(1e-8));
    }

    // a_B carries no x-dependence: two decompositions give the same constant
    const Ball b2(Point::d1(-0.6), 1.1);
    const double c1 = eval_J(fs, Point::d1(0.1), prm) - decomposition_I(fs, Point::d1(0.1), b2, prm);
    const double c2 = eval_J(fs, Point::d1(0.9), prm) - decomposition_I(fs, Point::d1(0.9), b2, prm);
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-7));

    // zero input
    std::vector<GridFunction> zero{GridFunction::poly(-1.0, 1.0, {0.0}), ind};
    CHECK(eval_J(zero, Point::d1(0.2), prm) == doctest::Approx(0.0));
}

TEST_CASE("m = 1 symmetric normalized values against the oracle") {
    const auto prm = FracParams::make(1, 1, 0.5, 0.0, {Exponent::from_value(2)});
    const GridFunction ind = GridFunction::indicator(-1.0, 1.0);
    std::vector<GridFunction> fs{ind};
    const double J0 = eval_J(fs, Point::d1(0.0), prm);
    // J(0) = I(0) - int_{|y|>1} |y|^{-1/2} restricted to supp f = 0 tail;
    // with supp f inside the unit ball the correction vanishes: J(0) = I(0).
    CHECK(J0 == doctest::Approx(4.0).epsilon(1e-9));
    const GridFunction wide = GridFunction::indicator(-2.0, 2.0);
    std::vector<GridFunction> fw{wide};
    const double corr = oracles::integrate(
        [](double y) { return std::pow(std::abs(y), -0.5); }, 1.0, 2.0, 1e-12) * 2.0;
    CHECK(eval_J(fw, Point::d1(0.0), prm) ==
          doctest::Approx(eval_I(fw, Point::d1(0.0), prm) - corr).epsilon(1e-8));
}

TEST_CASE("oscillation quotients") {
    const Weight one = Weight::power(0.0);
    auto ident = [](double x) { return x; };
    for (double c : {-1.0, 0.0, 2.5})
        for (double R : {0.1, 1.0, 10.0})
            CHECK(lipschitz_quotient(ident, one, 1.0, Ball::radial(c, R, 1)) ==
                  doctest::Approx(0.25).epsilon(1e-9));

    auto constf = [](double) { return 3.7; };
    CHECK(lipschitz_quotient(constf, one, 1.0, Ball::radial(0.0, 1.0, 1)) ==
          doctest::Approx(0.0));

    auto bump = [](double x) { return std::sin(2.0 * x) + 0.3 * x * x; };
    auto bump17 = [&](double x) { return bump(x) + 17.0; };
    const Ball b = Ball::radial(0.4, 1.3, 1);
    CHECK(lipschitz_quotient(bump, one, 0.6, b) ==
          doctest::Approx(lipschitz_quotient(bump17, one, 0.6, b)).epsilon(1e-12));

    // sup-normalized variant agrees with the mass variant for w = 1
    CHECK(lipschitz_quotient(bump, one, 0.6, b, LipschitzVariant::sup_mass) ==
          doctest::Approx(lipschitz_quotient(bump, one, 0.6, b)).epsilon(1e-12));
}

TEST_CASE("kernel gap samples") {
    Rng rng(123);
    const auto prm = prm_m2();
    const Ball ball(Point::d1(0.4), 2.0);
    const CornerSets cs = make_corner_sets(ball, 1);
    double min_ratio = kInf;
    for (int k = 0; k < 10000; ++k) {
        const Point x = cs.c1.sample(rng);
        const Point z = cs.c2.sample(rng);
        std::vector<Point> ys{cs.sample_quadrant(rng), cs.sample_quadrant(rng)};
        const auto [lhs, rhs] = kernel_gap(x, z, ys, ball, prm);
        min_ratio = std::min(min_ratio, lhs / rhs);

        if (k % 512 == 0) {
            const double lam = 3.7;
            Ball bs(Point::d1(0.4 * lam), 2.0 * lam);
            std::vector<Point> yss = ys;
            for (auto& y : yss) y[0] *= lam;
            const auto [l2, r2] =
                kernel_gap(Point::d1(x[0] * lam), Point::d1(z[0] * lam), yss, bs, prm);
            CHECK(l2 / r2 == doctest::Approx(lhs / rhs).epsilon(1e-9));
        }
    }
    CHECK(min_ratio > 0.0);

    // membership preconditions are enforced
    std::vector<Point> ys{cs.sample_quadrant(rng), cs.sample_quadrant(rng)};
    CHECK_THROWS_AS(kernel_gap(Point::d1(100.0), cs.c2.sample(rng), ys, ball, prm),
                    std::invalid_argument);
}

TEST_CASE("weighted norms") {
    const GridFunction ind = GridFunction::indicator(0.0, 1.0);
    CHECK(weighted_norm(ind, Weight::power(0.0), Exponent::from_value(2)) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(weighted_norm(ind, Weight::power(0.5), Exponent::from_value(2)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(weighted_norm(ind, Weight::power(0.0), Exponent::infinity()) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(
        weighted_norm(GridFunction::indicator(-1.0, 1.0), Weight::power(-0.8),
                      Exponent::from_value(2)),
        divergence_error);
}

TEST_CASE("oscillation report scales multilinearly") {
    const auto prm = FracParams::make(1, 2, 1.25, 0.75,
                                      {Exponent::from_value(4), Exponent::from_value(4)});
    WeightPair pair{Weight::power(0.0), {Weight::power(0.0), Weight::power(0.0)}};
    Rng rng(5);
    std::vector<GridFunction> fs{random_poly_bump(rng), random_poly_bump(rng)};
    std::vector<Ball> family;
    for (double r : {0.5, 1.0, 2.0, 4.0}) family.emplace_back(Point::d1(0.5), r);

    OperatorQuad q;
    q.sing_panels = 6;
    q.smooth_panels = 3;
    const OscillationReport a = boundedness_experiment(pair, fs, prm, family, q);

    std::vector<double> doubled_coeffs = fs[0].coefficients();
    for (double& c : doubled_coeffs) c *= 2.0;
    std::vector<GridFunction> fs2{GridFunction::poly(fs[0].support().lo[0],
                                                     fs[0].support().hi[0], doubled_coeffs),
                                  fs[1]};
    const OscillationReport b = boundedness_experiment(pair, fs2, prm, family, q);
    CHECK(b.norms_product == doctest::Approx(2.0 * a.norms_product).epsilon(1e-12));
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        CHECK(b.rows[i].quotient == doctest::Approx(2.0 * a.rows[i].quotient).epsilon(1e-12));
}
