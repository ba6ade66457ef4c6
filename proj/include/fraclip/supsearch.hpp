#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fraclip/conditions.hpp"
#include "fraclip/fit.hpp"
#include "fraclip/parallel.hpp"

namespace fraclip {

/// Log-log search grid over (|x_B|, R), plus the |x_B| = 0 axis.
struct GridSpec {
    double rho_lo = 1e-4, rho_hi = 1e4;
    double r_lo = 1e-4, r_hi = 1e4;
    int per_decade = 16;
    bool origin_axis = true;

    GridSpec extended() const {
        GridSpec g = *this;
        g.rho_lo /= 10.0;
        g.rho_hi *= 10.0;
        g.r_lo /= 10.0;
        g.r_hi *= 10.0;
        g.per_decade *= 2;
        return g;
    }
};

enum class Verdict { bounded, unbounded, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::unbounded: return "unbounded";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct SupPolicy {
    double stability_max = 0.05;
    double slope_floor = 0.01;  // significance floor for blow-up exponents
    int refine_passes = 2;
    unsigned threads = 1;
};

struct SupEstimate {
    double sup = 0.0;
    Ball argmax;
    GridSpec grid;
    double stability = 0.0;
    Verdict verdict = Verdict::inconclusive;
    SlopeFit r_to_zero;      // blow-up exponent as R -> 0
    SlopeFit r_to_inf;       // ... as R -> inf
    SlopeFit center_to_inf;  // ... as |x_B| -> inf
    bool hit_infinite = false;
};

namespace detail {

template <class F>
struct Sweep {
    std::vector<double> rho_axis, r_axis;
    std::vector<double> vals;    // rho-major
    std::vector<double> origin;  // rho = 0 row
    double sup = -kInf;
    double arg_rho = 0.0, arg_r = 1.0;
    bool hit_inf = false;

    Sweep(F& fn, const GridSpec& g, unsigned threads) {
        rho_axis = log_axis(g.rho_lo, g.rho_hi, g.per_decade);
        r_axis = log_axis(g.r_lo, g.r_hi, g.per_decade);
        const std::size_t nr = rho_axis.size(), nc = r_axis.size();
        vals.assign(nr * nc, 0.0);
        parallel_for(nr, threads, [&](std::size_t i) {
            for (std::size_t j = 0; j < nc; ++j) vals[i * nc + j] = fn(rho_axis[i], r_axis[j]);
        });
        if (g.origin_axis) {
            origin.assign(nc, 0.0);
            parallel_for(nc, threads, [&](std::size_t j) { origin[j] = fn(0.0, r_axis[j]); });
        }
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) note(vals[i * nc + j], rho_axis[i], r_axis[j]);
        for (std::size_t j = 0; j < origin.size(); ++j) note(origin[j], 0.0, r_axis[j]);
    }

    void note(double v, double rho, double r) {
        if (std::isinf(v)) hit_inf = true;
        if (v > sup) {
            sup = v;
            arg_rho = rho;
            arg_r = r;
        }
    }

    /// Per-R profile: max over all centers (origin row included).
    std::vector<double> profile_r() const {
        const std::size_t nc = r_axis.size();
        std::vector<double> p(nc, -kInf);
        for (std::size_t i = 0; i < rho_axis.size(); ++i)
            for (std::size_t j = 0; j < nc; ++j) p[j] = std::max(p[j], vals[i * nc + j]);
        for (std::size_t j = 0; j < origin.size(); ++j) p[j] = std::max(p[j], origin[j]);
        return p;
    }

    /// Per-center profile: max over all radii.
    std::vector<double> profile_rho() const {
        const std::size_t nc = r_axis.size();
        std::vector<double> p(rho_axis.size(), -kInf);
        for (std::size_t i = 0; i < rho_axis.size(); ++i)
            for (std::size_t j = 0; j < nc; ++j) p[i] = std::max(p[i], vals[i * nc + j]);
        return p;
    }
};

struct MaxPoint {
    double sup = -kInf;
    double arg_rho = 0.0;
    double arg_r = 1.0;
    bool hit_inf = false;
};

/// Local refinement passes around an incumbent maximum; the estimate only
/// grows, so nested grids stay monotone.
template <class F>
MaxPoint polish_max(F& fn, MaxPoint mp, int per_decade, int passes) {
    const double step0 = std::pow(10.0, 1.0 / per_decade);
    for (int pass = 1; pass <= passes; ++pass) {
        const double step = std::pow(step0, 1.0 / (1 << pass));
        for (int di = -2; di <= 2; ++di)
            for (int dj = -2; dj <= 2; ++dj) {
                const double rho = mp.arg_rho == 0.0 ? 0.0 : mp.arg_rho * std::pow(step, di);
                const double r = mp.arg_r * std::pow(step, dj);
                const double v = fn(rho, r);
                if (std::isinf(v)) mp.hit_inf = true;
                if (v > mp.sup) {
                    mp.sup = v;
                    mp.arg_rho = rho;
                    mp.arg_r = r;
                }
            }
    }
    return mp;
}

/// Grid max polished by local refinement.
template <class F>
MaxPoint refined_max(F& fn, const GridSpec& g, int passes, unsigned threads) {
    Sweep<F> sw(fn, g, threads);
    return polish_max(fn, MaxPoint{sw.sup, sw.arg_rho, sw.arg_r, sw.hit_inf}, g.per_decade,
                      passes);
}

/// Fit a blow-up exponent over the outermost decade of an axis profile.
inline SlopeFit edge_slope(const std::vector<double>& axis, const std::vector<double>& prof,
                           int per_decade, bool small_end, bool toward_zero) {
    const int k = per_decade + 1;
    std::vector<double> x, y;
    const std::size_t n = axis.size();
    for (int i = 0; i < k && static_cast<std::size_t>(i) < n; ++i) {
        const std::size_t idx = small_end ? static_cast<std::size_t>(i) : n - 1 - i;
        x.push_back(axis[idx]);
        y.push_back(prof[idx]);
    }
    SlopeFit f = fit_loglog(x, y);
    // Blow-up convention: divergence toward 0 means value ~ x^{-b}, b > 0.
    if (toward_zero) f.slope = -f.slope;
    return f;
}

}  // namespace detail

/// Estimate sup over all balls of a radial per-ball functional by a log-log
/// grid sweep with local refinement, a one-decade-extended/refined stability
/// pass, and blow-up slope fits on the outermost decades.
template <class F>
SupEstimate estimate_sup(F&& fn, int n_dim, const GridSpec& grid = {},
                         const SupPolicy& pol = {}) {
    SupEstimate est;
    est.grid = grid;

    const detail::MaxPoint base = detail::refined_max(fn, grid, pol.refine_passes, pol.threads);

    detail::Sweep<F> ext(fn, grid.extended(), pol.threads);
    const detail::MaxPoint extp =
        detail::polish_max(fn, detail::MaxPoint{ext.sup, ext.arg_rho, ext.arg_r, ext.hit_inf},
                           grid.extended().per_decade, pol.refine_passes);
    const double sup_ext = std::max(extp.sup, base.sup);
    est.hit_infinite = base.hit_inf || extp.hit_inf;
    est.sup = sup_ext;
    est.argmax = Ball::radial(extp.sup >= base.sup ? extp.arg_rho : base.arg_rho,
                              extp.sup >= base.sup ? extp.arg_r : base.arg_r, n_dim);
    if (std::isinf(sup_ext) || sup_ext == 0.0)
        est.stability = std::isinf(sup_ext) ? kInf : 0.0;
    else
        est.stability = std::abs(sup_ext - base.sup) / std::abs(sup_ext);

    const auto prof_r = ext.profile_r();
    const auto prof_rho = ext.profile_rho();
    const int ppd = grid.per_decade * 2;
    est.r_to_zero = detail::edge_slope(ext.r_axis, prof_r, ppd, true, true);
    est.r_to_inf = detail::edge_slope(ext.r_axis, prof_r, ppd, false, false);
    est.center_to_inf = detail::edge_slope(ext.rho_axis, prof_rho, ppd, false, false);

    auto significant_blowup = [&](const SlopeFit& f) {
        return f.valid && f.slope > pol.slope_floor && f.slope - f.ci_half > 0.0;
    };
    auto nonpositive = [&](const SlopeFit& f) {
        return !f.valid || f.slope <= std::max(f.ci_half, pol.slope_floor);
    };

    if (est.hit_infinite || significant_blowup(est.r_to_zero) ||
        significant_blowup(est.r_to_inf) || significant_blowup(est.center_to_inf)) {
        est.verdict = Verdict::unbounded;
    } else if (est.stability <= pol.stability_max && nonpositive(est.r_to_zero) &&
               nonpositive(est.r_to_inf) && nonpositive(est.center_to_inf)) {
        est.verdict = Verdict::bounded;
    } else {
        est.verdict = Verdict::inconclusive;
    }
    return est;
}

// ---------------------------------------------------------------------------
// Membership certification.
// ---------------------------------------------------------------------------

struct HypoChecks {
    bool all_power = true;
    bool rh_infty_unit = true;   // v_i^{-1} in RH_inf for p_i = 1
    bool doubling_dual = true;   // v_i^{-p_i'} doubling for p_i > 1
    bool rh_m_dual = true;       // v_i^{-p_i'} in RH_m for p_i > 1
};

inline HypoChecks hypothesis_checks(const WeightPair& pair, const FracParams& prm) {
    HypoChecks h;
    h.all_power = pair.all_power();
    if (!h.all_power) return h;
    for (std::size_t i : prm.unit_idx)
        h.rh_infty_unit =
            h.rh_infty_unit && reverse_holder_infty_holds(-pair.v[i].power_exponent(), prm.n);
    for (std::size_t i : prm.dual_idx) {
        const double a = -pair.v[i].power_exponent() * prm.p_vec[i].conjugate().value();
        h.doubling_dual = h.doubling_dual && is_doubling_power(a, prm.n);
        if (prm.m >= 2)
            h.rh_m_dual = h.rh_m_dual && reverse_holder_holds(a, static_cast<double>(prm.m), prm.n);
    }
    return h;
}

struct Certificate {
    ConditionId id = ConditionId::hcal;
    Verdict membership = Verdict::inconclusive;
    SupEstimate sup;
    Region region = Region::admissible;
    HypoChecks checks;
    std::string divergence_reason;
    bool approximate_weights = false;
};

inline Certificate certify_membership(const WeightPair& pair, const FracParams& prm,
                                      ConditionId id, const GridSpec& grid = {},
                                      const EvalPolicy& ep = {}, const SupPolicy& sp = {}) {
    Certificate cert;
    cert.id = id;
    cert.region = classify_region(prm);
    cert.checks = hypothesis_checks(pair, prm);
    cert.approximate_weights = !pair.all_power();
    auto fn = [&](double rho, double R) {
        return condition_value(id, pair, prm, Ball::radial(rho, R, prm.n), ep).value;
    };
    cert.sup = estimate_sup(fn, prm.n, grid, sp);
    cert.membership = cert.sup.verdict;
    if (cert.sup.hit_infinite)
        cert.divergence_reason = condition_value(id, pair, prm, cert.sup.argmax, ep).divergence;
    return cert;
}

// ---------------------------------------------------------------------------
// Probes.
// ---------------------------------------------------------------------------

struct ProbeReport {
    double fitted_blowup = 0.0;     // value ~ R^{-fitted} along R -> 0
    double predicted_blowup = 0.0;  // from the parameter regime
    SlopeFit fit;
    bool flat = false;
    bool divergent = false;
    std::vector<std::array<double, 2>> samples;  // (R, value)
};

/// Shrinking-ball diagnostic at a fixed center where power weights are
/// continuous and positive (default |x_B| = 1).
inline ProbeReport triviality_probe(const WeightPair& pair, const FracParams& prm,
                                    ConditionId id = ConditionId::hcal, double center = 1.0,
                                    double r_lo = 1e-4, double r_hi = 1e-1, int per_decade = 16,
                                    const EvalPolicy& ep = {}) {
    ProbeReport rep;
    const auto axis = log_axis(r_lo, r_hi, per_decade);
    std::vector<double> vals(axis.size());
    for (std::size_t j = 0; j < axis.size(); ++j) {
        vals[j] = condition_value(id, pair, prm, Ball::radial(center, axis[j], prm.n), ep).value;
        rep.samples.push_back({axis[j], vals[j]});
    }
    rep.fit = fit_loglog(axis, vals);
    rep.fitted_blowup = -rep.fit.slope;
    const double edge = prm.gamma - prm.n_over_p();
    if (prm.delta > edge)
        rep.predicted_blowup = prm.delta - edge;
    else if (prm.delta > 1.0)
        rep.predicted_blowup = prm.delta - 1.0;
    else
        rep.predicted_blowup = 0.0;
    rep.flat = std::abs(rep.fitted_blowup) < 0.02;
    rep.divergent = rep.fitted_blowup - rep.fit.ci_half > 0.0 && rep.fitted_blowup > 0.01;
    return rep;
}

struct RigidityReport {
    ProbeReport probe;          // related-weights functional along R -> 0
    double alpha = 0.0;         // p/(mp - 1)
    bool alpha_gt_one = false;
    bool flat_regime = false;
    bool product_rh_alpha = false;  // prod v_i^{-1} in RH_alpha (power path)
    double rh_worst_ratio = 0.0;
};

/// Related-weights rigidity diagnostic: with w = prod v_i, boundedness forces
/// delta = gamma - n/p when alpha = p/(mp-1) > 1; also checks the reverse
/// Hoelder consequence for prod v_i^{-1}.
inline RigidityReport rigidity_probe(const std::vector<Weight>& v, const FracParams& prm,
                                     const EvalPolicy& ep = {}) {
    RigidityReport rep;
    const double denom = prm.m - prm.p_recip;  // 1/alpha
    rep.alpha = denom > 0.0 ? 1.0 / denom : kInf;
    rep.alpha_gt_one = denom > 0.0 && denom < 1.0;

    WeightPair pair;
    pair.v = v;
    pair.w = weight_product(v, 1.0);
    rep.probe = triviality_probe(pair, prm, ConditionId::related, 1.0, 1e-4, 1e-1, 16, ep);
    rep.flat_regime = rep.probe.flat;

    bool all_power = true;
    for (const auto& vi : v) all_power = all_power && vi.is_power();
    if (all_power && rep.alpha_gt_one) {
        double c = 0.0;
        for (const auto& vi : v) c -= vi.power_exponent();
        rep.product_rh_alpha = reverse_holder_holds(c, rep.alpha, prm.n, &rep.rh_worst_ratio);
    }
    return rep;
}

}  // namespace fraclip
