#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fraclip/conditions.hpp"
#include "fraclip/errors.hpp"
#include "fraclip/fit.hpp"
#include "fraclip/geometry.hpp"
#include "fraclip/params.hpp"
#include "fraclip/quadrature.hpp"
#include "fraclip/weights.hpp"

namespace fraclip {

struct Box {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    int dim = 1;
};

/// Compactly supported test function: indicator of a box, polynomial times
/// the indicator (monomials in the box-normalized coordinate), or uniform
/// samples with multilinear interpolation.
class GridFunction {
public:
    enum class Kind { indicator, poly, samples };

    static GridFunction indicator(double lo, double hi) {
        GridFunction f;
        f.kind_ = Kind::indicator;
        f.box_ = Box{{lo, 0.0}, {hi, 0.0}, 1};
        return f;
    }
    static GridFunction indicator2(std::array<double, 2> lo, std::array<double, 2> hi) {
        GridFunction f;
        f.kind_ = Kind::indicator;
        f.box_ = Box{lo, hi, 2};
        return f;
    }
    /// f(y) = sum_k c_k t^k on [lo, hi], t = (2y - lo - hi)/(hi - lo).
    static GridFunction poly(double lo, double hi, std::vector<double> coeffs) {
        GridFunction f;
        f.kind_ = Kind::poly;
        f.box_ = Box{{lo, 0.0}, {hi, 0.0}, 1};
        f.coeffs_ = std::move(coeffs);
        return f;
    }
    static GridFunction samples(double lo, double hi, std::vector<double> values) {
        if (values.size() < 2) throw std::invalid_argument("need >= 2 samples");
        GridFunction f;
        f.kind_ = Kind::samples;
        f.box_ = Box{{lo, 0.0}, {hi, 0.0}, 1};
        f.values_ = std::move(values);
        return f;
    }

    Kind kind() const { return kind_; }
    const Box& support() const { return box_; }
    int dim() const { return box_.dim; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::vector<double>& sample_values() const { return values_; }

    double operator()(const Point& y) const {
        for (int d = 0; d < box_.dim; ++d)
            if (y[d] < box_.lo[d] || y[d] > box_.hi[d]) return 0.0;
        switch (kind_) {
            case Kind::indicator: return 1.0;
            case Kind::poly: {
                const double t =
                    (2.0 * y[0] - box_.lo[0] - box_.hi[0]) / (box_.hi[0] - box_.lo[0]);
                double v = 0.0;
                for (std::size_t k = coeffs_.size(); k-- > 0;) v = v * t + coeffs_[k];
                return v;
            }
            case Kind::samples: {
                const double u = (y[0] - box_.lo[0]) / (box_.hi[0] - box_.lo[0]) *
                                 (values_.size() - 1.0);
                const std::size_t k =
                    std::min(values_.size() - 2, static_cast<std::size_t>(std::max(0.0, u)));
                const double frac = u - static_cast<double>(k);
                return values_[k] + frac * (values_[k + 1] - values_[k]);
            }
        }
        return 0.0;
    }

private:
    Kind kind_ = Kind::indicator;
    Box box_;
    std::vector<double> coeffs_;
    std::vector<double> values_;
};

/// Random strictly positive bump: degree-2 polynomial times an indicator on
/// a random sub-box of [lo, hi].
inline GridFunction random_poly_bump(Rng& rng, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double width = (hi - lo) * (0.3 + 0.6 * u(rng));
    const double a = lo + u(rng) * (hi - lo - width);
    const double c0 = 0.5 + 0.5 * u(rng);
    const double c1 = -0.2 + 0.4 * u(rng);
    const double c2 = -0.2 + 0.4 * u(rng);
    return GridFunction::poly(a, a + width, {c0, c1, c2});
}

/// Kernel (sum_i |x - y_i|)^{gamma - m n}.
inline double kernel(const Point& x, std::span<const Point> ys, const FracParams& prm) {
    if (static_cast<int>(ys.size()) != prm.m) throw std::invalid_argument("need m points");
    double s = 0.0;
    for (const auto& y : ys) s += dist(x, y);
    if (s == 0.0) throw std::invalid_argument("kernel evaluated at its singular point");
    return std::pow(s, prm.gamma - static_cast<double>(prm.m) * prm.n);
}

struct OperatorQuad {
    int subst_power = 4;   // power substitution order toward the kernel point
    int sing_panels = 10;  // geometric-lite panels on a substituted side
    int smooth_panels = 5; // panels per smooth sub-interval
    int gauss_order = 8;
    double target_rel = 1e-5;

    OperatorQuad refined() const {
        OperatorQuad q = *this;
        q.sing_panels += 4;
        q.smooth_panels *= 2;
        q.gauss_order = 16;
        return q;
    }
};

namespace detail {

struct AxisNodes {
    std::vector<double> x;
    std::vector<double> w;
};

/// Scalar-axis nodes over [lo, hi] with jump/kink breakpoints and power
/// substitution toward the kernel coordinate; panel count honours the
/// 2^7-per-axis desk cap.
inline AxisNodes build_axis(double lo, double hi, std::vector<double> breaks,
                            double singular_at, bool has_singular, const OperatorQuad& q) {
    AxisNodes out;
    if (!(hi > lo)) return out;
    breaks.push_back(lo);
    breaks.push_back(hi);
    if (has_singular && singular_at > lo && singular_at < hi) breaks.push_back(singular_at);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [&](double a, double b) { return std::abs(a - b) < 1e-14 * (hi - lo); }),
                 breaks.end());
    while (!breaks.empty() && breaks.front() < lo) breaks.erase(breaks.begin());
    while (!breaks.empty() && breaks.back() > hi) breaks.pop_back();

    const GaussRule& rule = gauss_rule(q.gauss_order);
    int panels_used = 0;
    auto add_panel = [&](double a, double b) {
        if (!(b > a) || panels_used >= 128) return;
        ++panels_used;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            out.x.push_back(mid + half * rule.x[i]);
            out.w.push_back(half * rule.w[i]);
        }
    };
    auto add_substituted = [&](double from_sing, double to, int side) {
        // y = sing + side * len * t^k on t in [0,1], geometric-lite in t.
        const double len = std::abs(to - from_sing);
        if (!(len > 0.0)) return;
        const double k = q.subst_power;
        double t_hi = 1.0;
        for (int p = 0; p < q.sing_panels && panels_used < 128; ++p) {
            const double t_lo = (p + 1 == q.sing_panels) ? 0.0 : t_hi * 0.5;
            ++panels_used;
            const double mid = 0.5 * (t_lo + t_hi), half = 0.5 * (t_hi - t_lo);
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                const double t = mid + half * rule.x[i];
                out.x.push_back(from_sing + side * len * std::pow(t, k));
                out.w.push_back(half * rule.w[i] * len * k * std::pow(t, k - 1.0));
            }
            t_hi = t_lo;
        }
    };

    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double a = breaks[s], b = breaks[s + 1];
        const bool sing_left = has_singular && std::abs(a - singular_at) < 1e-14 * (hi - lo);
        const bool sing_right = has_singular && std::abs(b - singular_at) < 1e-14 * (hi - lo);
        if (sing_left)
            add_substituted(a, b, +1);
        else if (sing_right)
            add_substituted(b, a, -1);
        else
            for (int p = 0; p < q.smooth_panels; ++p)
                add_panel(a + (b - a) * p / q.smooth_panels,
                          a + (b - a) * (p + 1) / q.smooth_panels);
    }
    return out;
}

/// Flattened quadrature nodes for one argument y_i (n = 1 or 2).
struct FactorNodes {
    std::vector<Point> pts;
    std::vector<double> wf;  // weight * f_i(point)
};

inline FactorNodes factor_nodes(const GridFunction& f, const Point& x, bool singular,
                                std::vector<double> extra_breaks, const OperatorQuad& q) {
    const Box& box = f.support();
    FactorNodes fn;
    if (box.dim == 1) {
        const AxisNodes ax =
            build_axis(box.lo[0], box.hi[0], extra_breaks, x[0], singular, q);
        fn.pts.reserve(ax.x.size());
        for (std::size_t i = 0; i < ax.x.size(); ++i) {
            Point p = Point::d1(ax.x[i]);
            fn.pts.push_back(p);
            fn.wf.push_back(ax.w[i] * f(p));
        }
        return fn;
    }
    const AxisNodes ax0 = build_axis(box.lo[0], box.hi[0], extra_breaks, x[0], singular, q);
    const AxisNodes ax1 = build_axis(box.lo[1], box.hi[1], extra_breaks, x[1], singular, q);
    fn.pts.reserve(ax0.x.size() * ax1.x.size());
    for (std::size_t i = 0; i < ax0.x.size(); ++i)
        for (std::size_t j = 0; j < ax1.x.size(); ++j) {
            Point p = Point::d2(ax0.x[i], ax1.x[j]);
            fn.pts.push_back(p);
            fn.wf.push_back(ax0.w[i] * ax1.w[j] * f(p));
        }
    return fn;
}

template <class Leaf>
void tensor_recurse(const std::vector<FactorNodes>& fns, std::size_t k, double dist_sum,
                    double prod, const Point& x, const Leaf& leaf, StableSum& acc) {
    if (k == fns.size()) {
        acc.add(leaf(dist_sum, prod));
        return;
    }
    const FactorNodes& fn = fns[k];
    for (std::size_t i = 0; i < fn.pts.size(); ++i) {
        if (fn.wf[i] == 0.0) continue;
        tensor_recurse(fns, k + 1, dist_sum + dist(x, fn.pts[i]), prod * fn.wf[i], x, leaf, acc);
    }
}

inline void check_desk_caps(const FracParams& prm) {
    if (prm.n > 2) throw desk_scale_error("operator quadrature supports n in {1, 2}");
    if (prm.m > 3) throw desk_scale_error("operator quadrature supports m <= 3");
    if (prm.n == 2 && prm.m > 2)
        throw desk_scale_error("operator quadrature supports m <= 2 when n = 2");
}

}  // namespace detail

/// I_{gamma,m} at a point: tensor-product quadrature over the supports with
/// power-substituted refinement toward the diagonal singularity at x.
inline double eval_I(std::span<const GridFunction> fs, const Point& x, const FracParams& prm,
                     const OperatorQuad& q = {}) {
    detail::check_desk_caps(prm);
    if (static_cast<int>(fs.size()) != prm.m) throw std::invalid_argument("need m functions");
    if (!(prm.gamma > 0.0)) throw divergence_error("nonintegrable singularity: gamma <= 0");
    std::vector<detail::FactorNodes> fns;
    fns.reserve(fs.size());
    for (const auto& f : fs) {
        if (f.dim() != prm.n) throw std::invalid_argument("function dimension mismatch");
        fns.push_back(detail::factor_nodes(f, x, true, {}, q));
    }
    const double gmn = prm.gamma - static_cast<double>(prm.m) * prm.n;
    StableSum acc;
    detail::tensor_recurse(
        fns, 0, 0.0, 1.0, x,
        [&](double s, double p) { return s == 0.0 ? 0.0 : p * std::pow(s, gmn); }, acc);
    return acc.get();
}

/// eval_I with a refinement-delta error estimate.
inline std::pair<double, double> eval_I_with_error(std::span<const GridFunction> fs,
                                                   const Point& x, const FracParams& prm,
                                                   const OperatorQuad& q = {}) {
    const double coarse = eval_I(fs, x, prm, q);
    const double fine = eval_I(fs, x, prm, q.refined());
    return {fine, std::abs(fine - coarse) / std::max(1e-300, std::abs(fine))};
}

/// J_{gamma,m} at a point (n = 1): the kernel at x minus the unit-ball
/// normalized kernel at the origin, in a single tensor pass.
inline double eval_J(std::span<const GridFunction> fs, const Point& x, const FracParams& prm,
                     const OperatorQuad& q = {}) {
    detail::check_desk_caps(prm);
    if (prm.n != 1) throw desk_scale_error("J evaluation supports n = 1");
    if (static_cast<int>(fs.size()) != prm.m) throw std::invalid_argument("need m functions");
    const double gmn = prm.gamma - static_cast<double>(prm.m) * prm.n;
    std::vector<detail::FactorNodes> fns;
    for (const auto& f : fs)
        fns.push_back(detail::factor_nodes(f, x, true, {-1.0, 0.0, 1.0}, q));

    // The recursion tracks dist_sum for the x-kernel; the second kernel and
    // its indicator are recomputed per leaf from the node coordinates.
    std::vector<std::size_t> idx(fs.size(), 0);
    StableSum acc;
    std::function<void(std::size_t, double, double, double, bool)> rec =
        [&](std::size_t k, double dsum, double osum, double prod, bool all_unit) {
            if (k == fns.size()) {
                const double k1 = dsum == 0.0 ? 0.0 : std::pow(dsum, gmn);
                const double k2 = all_unit ? 0.0 : std::pow(osum, gmn);
                acc.add(prod * (k1 - k2));
                return;
            }
            const auto& fn = fns[k];
            for (std::size_t i = 0; i < fn.pts.size(); ++i) {
                if (fn.wf[i] == 0.0) continue;
                const double yi = fn.pts[i][0];
                rec(k + 1, dsum + std::abs(x[0] - yi), osum + std::abs(yi), prod * fn.wf[i],
                    all_unit && std::abs(yi) < 1.0);
            }
        };
    rec(0, 0.0, 0.0, 1.0, true);
    return acc.get();
}

/// The ball-dependent constant a_B of the decomposition J = a_B + I (n = 1,
/// B~ = 2B); vanishes exactly when x_B = 0 and 2B is the unit ball.
inline double ball_offset(std::span<const GridFunction> fs, const Ball& ball,
                          const FracParams& prm, const OperatorQuad& q = {}) {
    detail::check_desk_caps(prm);
    if (prm.n != 1) throw desk_scale_error("a_B evaluation supports n = 1");
    const double xb = ball.center[0];
    const double r2 = 2.0 * ball.radius;
    const double gmn = prm.gamma - static_cast<double>(prm.m) * prm.n;
    std::vector<detail::FactorNodes> fns;
    for (const auto& f : fs) {
        Point none = Point::d1(0.0);
        fns.push_back(detail::factor_nodes(f, none, false,
                                           {-1.0, 0.0, 1.0, xb - r2, xb, xb + r2}, q));
    }
    StableSum acc;
    std::function<void(std::size_t, double, double, double, bool, bool)> rec =
        [&](std::size_t k, double bsum, double osum, double prod, bool all_tilde,
            bool all_unit) {
            if (k == fns.size()) {
                const double k1 = all_tilde ? 0.0 : std::pow(bsum, gmn);
                const double k2 = all_unit ? 0.0 : std::pow(osum, gmn);
                acc.add(prod * (k1 - k2));
                return;
            }
            const auto& fn = fns[k];
            for (std::size_t i = 0; i < fn.pts.size(); ++i) {
                if (fn.wf[i] == 0.0) continue;
                const double yi = fn.pts[i][0];
                rec(k + 1, bsum + std::abs(xb - yi), osum + std::abs(yi), prod * fn.wf[i],
                    all_tilde && std::abs(yi - xb) < r2, all_unit && std::abs(yi) < 1.0);
            }
        };
    rec(0, 0.0, 0.0, 1.0, true, true);
    return acc.get();
}

/// The x-dependent part I of the decomposition J = a_B + I (n = 1).
inline double decomposition_I(std::span<const GridFunction> fs, const Point& x,
                              const Ball& ball, const FracParams& prm,
                              const OperatorQuad& q = {}) {
    detail::check_desk_caps(prm);
    if (prm.n != 1) throw desk_scale_error("decomposition supports n = 1");
    const double xb = ball.center[0];
    const double r2 = 2.0 * ball.radius;
    const double gmn = prm.gamma - static_cast<double>(prm.m) * prm.n;
    std::vector<detail::FactorNodes> fns;
    for (const auto& f : fs)
        fns.push_back(detail::factor_nodes(f, x, true, {xb - r2, xb, xb + r2}, q));
    StableSum acc;
    std::function<void(std::size_t, double, double, double, bool)> rec =
        [&](std::size_t k, double dsum, double bsum, double prod, bool all_tilde) {
            if (k == fns.size()) {
                const double k1 = dsum == 0.0 ? 0.0 : std::pow(dsum, gmn);
                const double k2 = all_tilde ? 0.0 : std::pow(bsum, gmn);
                acc.add(prod * (k1 - k2));
                return;
            }
            const auto& fn = fns[k];
            for (std::size_t i = 0; i < fn.pts.size(); ++i) {
                if (fn.wf[i] == 0.0) continue;
                const double yi = fn.pts[i][0];
                rec(k + 1, dsum + std::abs(x[0] - yi), bsum + std::abs(xb - yi),
                    prod * fn.wf[i], all_tilde && std::abs(yi - xb) < r2);
            }
        };
    rec(0, 0.0, 0.0, 1.0, true);
    return acc.get();
}

// ---------------------------------------------------------------------------
// Oscillation quotients and seminorms.
// ---------------------------------------------------------------------------

enum class LipschitzVariant { inverse_mass, sup_mass };

/// Per-ball mean-oscillation quotient of g (n = 1): the mean is taken with
/// the same nodes as the oscillation integral so discretization bias cancels.
inline double lipschitz_quotient(const std::function<double(double)>& g, const Weight& w,
                                 double delta, const Ball& ball,
                                 LipschitzVariant variant = LipschitzVariant::inverse_mass,
                                 int panels = 24) {
    if (ball.dim() != 1) throw desk_scale_error("oscillation quotients support n = 1");
    const double c = ball.center[0], R = ball.radius;
    const GaussRule& rule = gauss_rule(8);
    std::vector<double> xs, ws, gs;
    for (int p = 0; p < panels; ++p) {
        const double a = c - R + 2.0 * R * p / panels;
        const double b = c - R + 2.0 * R * (p + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            xs.push_back(mid + half * rule.x[i]);
            ws.push_back(half * rule.w[i]);
        }
    }
    gs.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) gs[i] = g(xs[i]);
    StableSum mean_acc;
    for (std::size_t i = 0; i < xs.size(); ++i) mean_acc.add(ws[i] * gs[i]);
    const double mean = mean_acc.get() / (2.0 * R);
    StableSum osc_acc;
    for (std::size_t i = 0; i < xs.size(); ++i) osc_acc.add(ws[i] * std::abs(gs[i] - mean));
    const double osc = osc_acc.get();

    const double vol = ball.volume();
    if (variant == LipschitzVariant::inverse_mass) {
        const double winv = inverse_weight_mass(w, ball);
        return osc / (winv * std::pow(vol, delta));  // n = 1: |B|^{delta/n}
    }
    const double wsup = weight_ess_sup_ball(w, ball);
    return wsup * osc / std::pow(vol, 1.0 + delta);
}

/// Lemma-gap sample: lhs = kernel(x, ys) - kernel(z, ys), rhs = the scaled
/// shifted-kernel lower envelope; callers estimate the best constant as
/// min lhs/rhs over admissible samples.
inline std::pair<double, double> kernel_gap(const Point& x, const Point& z,
                                            std::span<const Point> ys, const Ball& ball,
                                            const FracParams& prm) {
    const CornerSets cs = make_corner_sets(ball, prm.n);
    if (!cs.c1.contains(x)) throw std::invalid_argument("x must lie in C1");
    if (!cs.c2.contains(z)) throw std::invalid_argument("z must lie in C2");
    for (const auto& y : ys)
        if (!cs.in_quadrant(y)) throw std::invalid_argument("y_j must lie in the quadrant");
    const double lhs = kernel(x, ys, prm) - kernel(z, ys, prm);
    double dsum = 0.0;
    for (const auto& y : ys) dsum += dist(ball.center, y);
    const double s = ball.scale();
    const double rhs =
        s / std::pow(s + dsum, static_cast<double>(prm.m) * prm.n - prm.gamma + 1.0);
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Norms and the boundedness experiment.
// ---------------------------------------------------------------------------

/// ||f v||_p over the support (n = 1), relative accuracy ~1e-6.
inline double weighted_norm(const GridFunction& f, const Weight& v, Exponent p) {
    if (f.dim() != 1) throw desk_scale_error("weighted norms support n = 1");
    const Box& box = f.support();
    auto fv = [&](double y) { return std::abs(f(Point::d1(y))) * v(std::abs(y)); };
    if (p.is_infinite()) {
        double best = 0.0;
        for (int i = 0; i <= 4096; ++i) {
            const double y = box.lo[0] + (box.hi[0] - box.lo[0]) * i / 4096.0;
            best = std::max(best, fv(y));
        }
        return best;
    }
    const double pv = p.value();
    const double b = v.is_power() ? v.power_exponent() : v.exponent_near_zero();
    if (b * pv <= -1.0 && box.lo[0] <= 0.0 && box.hi[0] >= 0.0)
        throw divergence_error("||f v||_p diverges at the origin");
    auto integrand = [&](double y) { return std::pow(fv(y), pv); };
    const GaussRule& rule = gauss_rule(16);
    StableSum acc;
    std::vector<double> cuts{box.lo[0], box.hi[0]};
    if (box.lo[0] < 0.0 && box.hi[0] > 0.0) cuts.insert(cuts.begin() + 1, 0.0);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], c = cuts[s + 1];
        if (b != 0.0 && a == 0.0)
            acc.add(integrate_endpoint(integrand, a, c, b * pv, true, rule));
        else if (b != 0.0 && c == 0.0)
            acc.add(integrate_endpoint(integrand, a, c, b * pv, false, rule));
        else
            acc.add(integrate_smooth(integrand, a, c, rule, 8));
    }
    return std::pow(acc.get(), 1.0 / pv);
}

struct OscillationRow {
    double radius = 0.0;
    double quotient = 0.0;  // per-ball mean-oscillation quotient
    double ratio = 0.0;     // quotient / prod ||f_i v_i||_{p_i}
};

struct OscillationReport {
    std::vector<OscillationRow> rows;
    double norms_product = 0.0;
    double max_quotient = 0.0;
    double ratio = 0.0;  // max quotient over the family / norms product
    SlopeFit small_ball;  // blow-up fit of the quotient toward R -> 0
    std::string label =
        "numerical evidence from a finite ball family; not a proof of boundedness";
};

/// Oscillation quotients of the operator output over a ball family.  The
/// quotient is constant-shift invariant, so I and J give identical rows.
inline OscillationReport boundedness_experiment(const WeightPair& pair,
                                                std::span<const GridFunction> fs,
                                                const FracParams& prm,
                                                std::span<const Ball> family,
                                                const OperatorQuad& q = {},
                                                LipschitzVariant variant =
                                                    LipschitzVariant::inverse_mass) {
    if (prm.n != 1) throw desk_scale_error("boundedness experiment supports n = 1");
    OscillationReport rep;
    rep.norms_product = 1.0;
    for (std::size_t i = 0; i < fs.size(); ++i)
        rep.norms_product *= weighted_norm(fs[i], pair.v[i], prm.p_vec[i]);

    auto g = [&](double xx) { return eval_I(fs, Point::d1(xx), prm, q); };
    for (const Ball& b : family) {
        OscillationRow row;
        row.radius = b.radius;
        row.quotient = lipschitz_quotient(g, pair.w, prm.delta, b, variant);
        row.ratio = row.quotient / rep.norms_product;
        rep.rows.push_back(row);
        rep.max_quotient = std::max(rep.max_quotient, row.quotient);
    }
    rep.ratio = rep.max_quotient / rep.norms_product;

    std::vector<double> rs, qs;
    for (const auto& row : rep.rows) {
        rs.push_back(row.radius);
        qs.push_back(row.quotient);
    }
    // Smallest decade of the family.
    std::vector<double> rs_small, qs_small;
    double rmin = kInf;
    for (double r : rs) rmin = std::min(rmin, r);
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (rs[i] <= 10.0 * rmin) {
            rs_small.push_back(rs[i]);
            qs_small.push_back(qs[i]);
        }
    rep.small_ball = fit_loglog(rs_small, qs_small);
    rep.small_ball.slope = -rep.small_ball.slope;  // blow-up convention
    return rep;
}

}  // namespace fraclip
