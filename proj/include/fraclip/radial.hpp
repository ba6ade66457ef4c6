#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fraclip/errors.hpp"
#include "fraclip/geometry.hpp"
#include "fraclip/quadrature.hpp"

namespace fraclip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// t -> (shift + t)^{-expo}; shift = 0 gives the raw power kernel.
struct PowKernel {
    double shift = 0.0;
    double expo = 0.0;
    double operator()(double t) const { return std::pow(shift + t, -expo); }
};

struct UnitKernel {
    double operator()(double) const { return 1.0; }
};

namespace detail {

/// Integral of f(|y|) over the sphere { |y - x_B| = t } (two points in n=1,
/// a circle in n=2).  `s` is the power behaviour of f near 0 (f ~ r^{-s});
/// it steers the angular panel layout when the sphere passes near the origin.
/// `d` is |rho - t|, passed separately so crossing-adjacent quadrature can
/// supply it to full precision (t - rho underflows the ulp of rho otherwise).
template <class F>
double sphere_radial(const F& f, double s, double rho, double t, double d, int n) {
    if (n == 1) return f(d) + f(rho + t);

    if (rho == 0.0 || t == 0.0) return 2.0 * kPi * t * f(rho + t);

    const double q = 2.0 * std::sqrt(rho * t);
    auto g = [&](double phi) {
        const double sp = std::sin(0.5 * phi);
        return f(std::sqrt(d * d + q * q * sp * sp));
    };
    const GaussRule& rule = gauss_rule(16);

    if (d == 0.0) {
        // Circle through the origin: integrable iff s < 1.
        if (s >= 1.0) throw divergence_error("sphere through origin with s >= 1");
        const double e = s > 0.0 ? -s : 0.0;
        return 2.0 * t * integrate_endpoint(g, 0.0, kPi, e, true, rule);
    }
    if (d >= q) return 2.0 * t * integrate_smooth(g, 0.0, kPi, rule, 4);

    // Peak of width ~ d/q at phi = 0: plateau panel then octave doubling.
    const double phi_k = 2.0 * std::asin(std::min(1.0, d / q));
    StableSum acc;
    acc.add(integrate_smooth(g, 0.0, phi_k, rule, 2));
    double lo = phi_k;
    while (lo < kPi) {
        const double hi = std::min(2.0 * lo, kPi);
        acc.add(integrate_rule(g, lo, hi, rule));
        lo = hi;
    }
    return 2.0 * t * acc.get();
}

/// Exponent of the leading nonsmooth term of t -> sphere_radial(f,s,rho,t,n)
/// at the crossing t = rho; NaN when smooth there.
inline double crossing_exponent(double s, int n) {
    if (s == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (n == 1) return -s;
    if (s == 1.0) return -0.1;  // logarithmic; proxy exponent for the panel layout
    return 1.0 - s;
}

}  // namespace detail

/// Integral of f(|y|) * kern(|y - x_B|) over the shell r1 <= |y - x_B| <= r2.
/// `s` is the power behaviour of f near the origin (0 when bounded there).
template <class F, class K>
double shell_radial_integral(const F& f, double s, const K& kern, double rho, double r1,
                             double r2, int n) {
    if (!(r2 > r1) || r1 < 0.0) return 0.0;
    auto g = [&](double t) {
        return kern(t) * detail::sphere_radial(f, s, rho, t, std::abs(rho - t), n);
    };
    const GaussRule& rule = gauss_rule(16);

    std::vector<double> cuts{r1, r2};
    if (rho > r1 && rho < r2) cuts.insert(cuts.begin() + 1, rho);

    StableSum acc;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        const bool cross_left = a == rho;   // covers rho == 0 with r1 == 0 too
        const bool cross_right = b == rho;
        const double e_cross = detail::crossing_exponent(s, n);

        if ((cross_left || cross_right) && !std::isnan(e_cross)) {
            // Integrate in the offset delta = |t - rho| so the weight sees
            // the crossing distance at full precision.
            const double side = cross_left ? 1.0 : -1.0;
            const double len = cross_left ? b - rho : rho - a;
            auto h = [&](double delta) {
                const double t = rho + side * delta;
                return kern(t) * detail::sphere_radial(f, s, rho, t, delta, n);
            };
            acc.add(integrate_endpoint(h, 0.0, len, e_cross, true, rule));
        } else {
            // Octave-or-less spans far from the crossing are analytic enough
            // for a couple of panels; keep six near the crossing scale.
            const bool short_far =
                b <= 2.0 * a && (rho < 0.25 * a || rho > 4.0 * b || cross_left || cross_right);
            acc.add(integrate_smooth(g, a, b, rule, short_far ? 2 : 6));
        }
    }
    return acc.get();
}

/// Integral of f(|y|) over a ball, generic radial path.
template <class F>
double ball_radial_integral(const F& f, double s, const Ball& ball) {
    return shell_radial_integral(f, s, UnitKernel{}, ball.center_norm(), 0.0, ball.radius,
                                 ball.dim());
}

/// Exact/semi-exact integral of |x|^a over a ball: closed form in n=1,
/// origin-centered polar quadrature in n=2 (relative error <= 1e-9).
/// Diverges exactly when a <= -n and 0 lies in the closure of the ball.
inline double ball_integral_power(double a, const Ball& ball) {
    const int n = ball.dim();
    const double rho = ball.center_norm();
    const double R = ball.radius;
    if (a <= -static_cast<double>(n) && rho <= R)
        throw divergence_error("|x|^a not integrable on a ball reaching the origin");

    if (n == 1) {
        if (rho >= R) {
            // (rho+R)^{a+1} - (rho-R)^{a+1} cancels badly for R << rho; the
            // log1p/expm1 form stays accurate to a few ulp.
            const double u = R / rho;
            if (a == -1.0) return std::log1p(u) - std::log1p(-u);
            const double ap1 = a + 1.0;
            if (u < 0.5) {
                const double x = ap1 * std::log1p(u);
                const double y = ap1 * std::log1p(-u);
                return std::pow(rho, ap1) / ap1 * std::exp(y) * std::expm1(x - y);
            }
            return (std::pow(rho + R, ap1) - std::pow(rho - R, ap1)) / ap1;
        }
        const double ap1 = a + 1.0;  // straddles the origin; a > -1 here
        return (std::pow(R - rho, ap1) + std::pow(R + rho, ap1)) / ap1;
    }

    if (rho == 0.0) return 2.0 * kPi * std::pow(R, a + 2.0) / (a + 2.0);

    StableSum acc;
    const double r_lo = rho < R ? R - rho : rho - R;
    if (rho < R) acc.add(2.0 * kPi * std::pow(R - rho, a + 2.0) / (a + 2.0));
    // Arc part in the offset coordinate d = r - r_lo, with the half-angle in
    // asin form; both avoid the cancellations that kill the naive
    // acos((rho^2 + r^2 - R^2)/(2 rho r)) at rho >> R.
    const double s_lo = rho < R ? R - 2.0 * rho : -R;
    const double d_max = (rho + R) - r_lo;
    auto arc = [&](double d) {
        const double r = r_lo + d;
        const double s = s_lo + d;
        const double num = (R - s) * (R + s);  // R^2 - (rho - r)^2
        const double q = std::sqrt(std::clamp(num / (4.0 * rho * r), 0.0, 1.0));
        return std::pow(r, a + 1.0) * 4.0 * std::asin(q);
    };
    auto arc_hi = [&](double d) {  // same, with R - s recovered from d_max - d
        const double r = r_lo + d;
        const double s = s_lo + d;
        const double num = (d_max - d) * (R + s);
        const double q = std::sqrt(std::clamp(num / (4.0 * rho * r), 0.0, 1.0));
        return std::pow(r, a + 1.0) * 4.0 * std::asin(q);
    };
    const GaussRule& rule = gauss_rule(16);
    const double e_left = r_lo == 0.0 ? a + 1.0 : 0.5;
    acc.add(integrate_endpoint(arc, 0.0, 0.5 * d_max, e_left, true, rule));
    acc.add(integrate_endpoint(arc_hi, 0.5 * d_max, d_max, 0.5, false, rule));
    return acc.get();
}

/// Two-sided comparability envelope R^n * max(R, |x_B|)^a for the integral
/// of |x|^a over B(x_B, R).
inline double power_ball_envelope(double a, const Ball& ball) {
    return std::pow(ball.radius, ball.dim()) *
           std::pow(std::max(ball.radius, ball.center_norm()), a);
}

/// Range of |y| over a set, as an interval [lo, hi] (hi may be +inf).
struct RadiusRange {
    double lo = 0.0;
    double hi = kInf;
};

inline RadiusRange radius_range_ball(double rho, double R) {
    return {std::max(rho - R, 0.0), rho + R};
}

/// Over the annulus 2B \ B.
inline RadiusRange radius_range_annulus(double rho, double R) {
    double lo = 0.0;
    if (rho < R)
        lo = R - rho;
    else if (rho > 2.0 * R)
        lo = rho - 2.0 * R;
    return {lo, rho + 2.0 * R};
}

/// sup of r^c over a radius interval; +inf when c < 0 and the interval
/// reaches the origin.
inline double sup_power_on_range(double c, RadiusRange rng) {
    if (c == 0.0) return 1.0;
    if (c > 0.0) return std::pow(rng.hi, c);
    return rng.lo > 0.0 ? std::pow(rng.lo, c) : kInf;
}

/// sup over t >= t_lo of (extremal |y| at distance t from x_B)^c (S + t)^{-theta}
/// with theta > 0.  Exact by piecewise-monotone analysis on rays.
inline double sup_power_kernel(double c, double theta, double rho, double S, double t_lo) {
    if (c == 0.0) return std::pow(S + t_lo, -theta);
    if (c < 0.0) {
        if (rho >= t_lo) return kInf;  // a sphere through the origin is reachable
        return std::pow(t_lo - rho, c) * std::pow(S + t_lo, -theta);
    }
    if (c > theta) return kInf;  // grows like t^{c-theta}
    auto g = [&](double t) { return std::pow(rho + t, c) * std::pow(S + t, -theta); };
    double best = g(t_lo);
    if (c == theta) return std::max(best, 1.0);  // approached as t -> inf
    const double t_star = (c * S - theta * rho) / (theta - c);
    if (t_star > t_lo) best = std::max(best, g(t_star));
    return best;
}

struct LadderPolicy {
    double tail_rel = 1e-10;  // stop when the geometric tail bound falls below this
    int max_annuli = 400;
    int min_annuli = 0;  // force at least this many annuli (truncation studies)
};

struct LadderResult {
    double value = 0.0;
    int annuli = 0;
    bool converged = true;
};

/// Dyadic-annuli evaluation of  integral f(|y|) * kernel(|x_B - y|) dy  over
/// the full space (include_ball) or the complement of B.  The ladder starts
/// at B itself and steps through B_{k+1} \ B_k with B_k = B(x_B, 2^k R);
/// truncation uses a geometric majorant on the measured annulus ratio.
/// `tail_decay` is the power behaviour of f at infinity (f ~ r^{-tail_decay});
/// the caller must have checked kexp + tail_decay > n.
template <class F>
LadderResult dyadic_ladder_integral(const F& f, double s, double tail_decay, double rho,
                                    double R, int n, double kshift, double kexp,
                                    bool include_ball, const LadderPolicy& pol = {}) {
    LadderResult res;
    StableSum acc;
    if (include_ball) {
        PowKernel kern{kshift, kexp};
        acc.add(shell_radial_integral(f, s, kern, rho, 0.0, R, n));
    }
    const double ratio_th = std::pow(2.0, n - kexp - tail_decay);
    double prev = -1.0;
    double lo = R;
    for (int k = 0; k < pol.max_annuli; ++k) {
        const double hi = 2.0 * lo;
        PowKernel kern{kshift, kexp};
        const double piece = shell_radial_integral(f, s, kern, rho, lo, hi, n);
        acc.add(piece);
        res.annuli = k + 1;
        if (lo >= 8.0 * std::max(R, rho) && prev > 0.0 && k + 1 >= pol.min_annuli) {
            const double r = std::clamp(std::max(piece / prev, ratio_th), 0.0, 0.995);
            const double tail_bound = piece * r / (1.0 - r);
            if (tail_bound <= pol.tail_rel * std::abs(acc.get())) {
                res.value = acc.get();
                return res;
            }
        }
        prev = piece;
        lo = hi;
    }
    res.value = acc.get();
    res.converged = false;
    return res;
}

}  // namespace fraclip
