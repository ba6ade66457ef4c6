#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fraclip/errors.hpp"

namespace fraclip {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

inline GaussRule make_gauss(int n) {
    GaussRule r;
    r.x.assign(static_cast<std::size_t>(n), 0.0);
    r.w.assign(static_cast<std::size_t>(n), 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const std::size_t j = static_cast<std::size_t>(i);
        r.x[j] = -x;
        r.x[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.w[j] = w;
        r.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

}  // namespace detail

inline const GaussRule& gauss_rule(int n) {
    static const GaussRule g4 = detail::make_gauss(4);
    static const GaussRule g8 = detail::make_gauss(8);
    static const GaussRule g16 = detail::make_gauss(16);
    static const GaussRule g32 = detail::make_gauss(32);
    switch (n) {
        case 4: return g4;
        case 8: return g8;
        case 16: return g16;
        case 32: return g32;
    }
    throw std::invalid_argument("supported Gauss orders: 4, 8, 16, 32");
}

/// Order-stable compensated accumulator (Neumaier); saturates on the first
/// non-finite term instead of poisoning the compensation.
struct StableSum {
    double s = 0.0;
    double c = 0.0;
    void add(double v) {
        if (!std::isfinite(v) || !std::isfinite(s)) {
            s += v;
            c = 0.0;
            return;
        }
        const double t = s + v;
        c += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double get() const { return std::isfinite(s) ? s + c : s; }
};

template <class F>
double integrate_rule(F&& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    StableSum acc;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        acc.add(rule.w[i] * f(mid + half * rule.x[i]));
    return half * acc.get();
}

template <class F>
double integrate_smooth(F&& f, double a, double b, const GaussRule& rule, int panels = 4) {
    if (!(b > a)) return 0.0;
    const double h = (b - a) / panels;
    StableSum acc;
    for (int k = 0; k < panels; ++k)
        acc.add(integrate_rule(f, a + k * h, a + (k + 1) * h, rule));
    return acc.get();
}

/// Integrate f on [a,b] whose lowest-order behaviour at one endpoint is
/// (distance)^e with e > -1 (fractional powers allowed, e.g. slices of
/// |y|^{-s}).  The power substitution x = end +- w*u^k with k ~ 4/(1+e)
/// flattens the leading term to u^{k(1+e)-1} >= u^3; light geometric panels
/// in u then resolve the remaining mild nonsmoothness.
///
/// Blow-up endpoints (e < 0) must sit at coordinate 0, or the integrand must
/// be offset-aware: at a nonzero anchor the substituted offset falls below
/// the anchor's ulp and the sliver there cannot be represented.
template <class F>
double integrate_endpoint(F&& f, double a, double b, double e, bool singular_at_left,
                          const GaussRule& rule) {
    if (!(b > a)) return 0.0;
    if (!(e > -1.0)) throw divergence_error("endpoint exponent <= -1 is not integrable");
    int k = 1;
    if (e < 3.0) {
        k = static_cast<int>(std::ceil(4.0 / (1.0 + e)));
        if (k < 1) k = 1;
        if (k > 64) k = 64;
    }
    const double w = b - a;
    const double kk = static_cast<double>(k);
    auto g = [&](double u) {
        const double uk = std::pow(u, k);
        const double x = singular_at_left ? a + w * uk : b - w * uk;
        if (x == (singular_at_left ? a : b)) return 0.0;  // offset below one ulp
        return f(x) * w * kk * std::pow(u, k - 1);
    };
    // Geometric u-panels toward 0: [0, 2^-12], ..., [1/2, 1].
    StableSum acc;
    double hi = 1.0;
    for (int lev = 0; lev < 12; ++lev) {
        const double lo = hi * 0.5;
        acc.add(integrate_rule(g, lo, hi, rule));
        hi = lo;
    }
    acc.add(integrate_rule(g, 0.0, hi, rule));
    return acc.get();
}

namespace detail {

template <class F>
void adaptive_step(const F& f, double a, double b, double whole, double tol, int depth,
                   StableSum& out) {
    const double mid = 0.5 * (a + b);
    const double left = integrate_rule(f, a, mid, gauss_rule(8));
    const double right = integrate_rule(f, mid, b, gauss_rule(8));
    const double err = std::abs(left + right - whole);
    if (depth <= 0 || err <= tol) {
        out.add(left);
        out.add(right);
        return;
    }
    adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1, out);
    adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Bisection-adaptive Gauss integration; tolerance is absolute.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 28) {
    if (!(b > a)) return 0.0;
    StableSum acc;
    detail::adaptive_step(f, a, b, integrate_rule(f, a, b, gauss_rule(8)), abs_tol, max_depth,
                          acc);
    return acc.get();
}

}  // namespace fraclip
