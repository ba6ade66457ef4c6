#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fraclip/errors.hpp"
#include "fraclip/geometry.hpp"
#include "fraclip/params.hpp"
#include "fraclip/radial.hpp"
#include "fraclip/weights.hpp"

namespace fraclip {

enum class ConditionId { hcal, hbb, local, global, mixed, related };

inline const char* condition_id_name(ConditionId id) {
    switch (id) {
        case ConditionId::hcal: return "Hcal";
        case ConditionId::hbb: return "Hbb";
        case ConditionId::local: return "local_2_4";
        case ConditionId::global: return "global_2_5";
        case ConditionId::mixed: return "mixed_2_6";
        case ConditionId::related: return "related_weights";
    }
    return "?";
}

inline ConditionId condition_id_from(const std::string& s) {
    if (s == "Hcal") return ConditionId::hcal;
    if (s == "Hbb") return ConditionId::hbb;
    if (s == "local_2_4") return ConditionId::local;
    if (s == "global_2_5") return ConditionId::global;
    if (s == "mixed_2_6") return ConditionId::mixed;
    if (s == "related_weights") return ConditionId::related;
    throw std::invalid_argument("unknown condition id: " + s);
}

struct EvalPolicy {
    LadderPolicy ladder;
    int tab_grid = 1 << 14;  // log-grid points for tabulated essential sups
};

/// One per-ball functional evaluation.  value recomposes exactly as
/// prefactor * prod(factors); +inf is first-class and carries a reason.
struct ConditionValue {
    Ball ball;
    ConditionId id = ConditionId::hcal;
    double value = 0.0;
    double prefactor = 0.0;
    std::vector<double> factors;
    std::string divergence;  // empty when finite

    void compose() {
        double v = prefactor;
        for (double f : factors) v *= f;
        value = v;
    }
};

namespace detail {

template <class G>
double log_grid_sup(G&& g, double lo, double hi, int points, int refine) {
    double best = -kInf;
    double arg = lo;
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i) {
        const double r = std::exp(llo + (lhi - llo) * i / (points - 1.0));
        const double val = g(r);
        if (val > best) {
            best = val;
            arg = r;
        }
    }
    double span = (lhi - llo) / (points - 1.0);
    for (int pass = 0; pass < refine; ++pass) {
        const double la = std::log(arg);
        for (int i = -16; i <= 16; ++i) {
            const double r = std::exp(la + span * i / 16.0);
            const double val = g(r);
            if (val > best) {
                best = val;
                arg = r;
            }
        }
        span /= 16.0;
    }
    return best;
}

/// ess sup of v^{-1} over the radius interval rng (tabulated path).
inline double tab_inv_sup_on_range(const Weight& v, RadiusRange rng, const EvalPolicy& pol) {
    const double e0 = v.exponent_near_zero();
    if (rng.lo <= 0.0) {
        if (e0 > 0.0) return kInf;  // v^{-1} unbounded toward the origin
        return log_grid_sup([&](double r) { return 1.0 / v(r); },
                            std::min(1e-8, rng.hi * 1e-8), rng.hi, pol.tab_grid, 3);
    }
    return log_grid_sup([&](double r) { return 1.0 / v(r); }, rng.lo, rng.hi, pol.tab_grid, 3);
}

}  // namespace detail

/// integral of w^{-1} over B; exact for power weights.
inline double inverse_weight_mass(const Weight& w, const Ball& ball) {
    return weight_pow_ball_integral(w, -1.0, ball);
}

/// ess sup of w over B (exact for powers; +inf when unbounded there).
inline double weight_ess_sup_ball(const Weight& w, const Ball& ball, const EvalPolicy& pol = {}) {
    const RadiusRange rng = radius_range_ball(ball.center_norm(), ball.radius);
    if (w.is_power()) return w.coefficient() * sup_power_on_range(w.power_exponent(), rng);
    const double e0 = w.exponent_near_zero();
    if (rng.lo <= 0.0 && e0 < 0.0) return kInf;
    return detail::log_grid_sup([&](double r) { return w(r); },
                                std::max(rng.lo, rng.hi * 1e-10), rng.hi, pol.tab_grid, 3);
}

struct FactorResult {
    double value = kInf;
    const char* reason = nullptr;  // set when divergent / not finite
};

/// The i-th factor of the class functionals over the whole space: for
/// p_i > 1 the L^{p_i'} integral of v_i^{-p_i'} against the shifted kernel
/// (R + |x_B - y|)^{-theta_i p_i'}, assembled from the ball plus dyadic
/// annuli; for p_i = 1 the essential sup of v_i^{-1} against the same
/// kernel, closed-form for power weights.
inline FactorResult kernel_factor(const Weight& v, Exponent p_i, double theta,
                                  const Ball& ball, const EvalPolicy& pol = {}) {
    const double rho = ball.center_norm();
    const double R = ball.radius;
    const int n = ball.dim();
    FactorResult out;

    if (p_i.is_one()) {
        if (v.is_power()) {
            const double c = -v.power_exponent();
            out.value = sup_power_kernel(c, theta, rho, R, 0.0) / v.coefficient();
            if (std::isinf(out.value))
                out.reason = c > theta ? "sup_grows_at_infinity" : "v_inverse_unbounded_at_origin";
            return out;
        }
        // v^{-1} ~ r^{c} with c = -exponent(v): unbounded toward the origin
        // when c < 0, growing past the kernel decay when c > theta.
        const double c0 = -v.exponent_near_zero();
        const double cinf = -v.exponent_at_infinity();
        if (c0 < 0.0) {
            out.reason = "v_inverse_unbounded_at_origin";
            return out;
        }
        if (cinf > theta) {
            out.reason = "sup_grows_at_infinity";
            return out;
        }
        out.value = detail::log_grid_sup(
            [&](double r) { return (1.0 / v(r)) * std::pow(R + std::abs(rho - r), -theta); },
            R * 1e-8, R * 1e8, pol.tab_grid, 3);
        return out;
    }

    const double pprime = p_i.conjugate().value();  // finite since p_i > 1
    double s, tail;
    if (v.is_power()) {
        const double b = v.power_exponent();
        s = b * pprime;
        tail = b * pprime;
    } else {
        s = v.exponent_near_zero() * pprime;
        tail = v.exponent_at_infinity() * pprime;
    }
    if (s >= static_cast<double>(n)) {
        out.reason = "v_pow_not_locally_integrable";
        return out;
    }
    if (!(theta * pprime + tail > static_cast<double>(n))) {
        out.reason = "nonintegrable_tail";
        return out;
    }
    auto f = [&](double r) { return v.is_power() ? std::pow(r, -s) : std::pow(v(r), -pprime); };
    const LadderResult lr =
        dyadic_ladder_integral(f, s, tail, rho, R, n, R, theta * pprime, true, pol.ladder);
    out.value = std::pow(lr.value, 1.0 / pprime);
    if (v.is_power()) out.value /= v.coefficient();
    if (!lr.converged) out.reason = "tail_truncation_incomplete";
    return out;
}

/// Complement-only variant used by the global condition: raw kernel
/// |x_B - y|^{-theta p'} for p_i > 1, shifted-kernel sup restricted to the
/// complement for p_i = 1.
inline FactorResult kernel_factor_complement(const Weight& v, Exponent p_i, double theta,
                                             const Ball& ball, const EvalPolicy& pol = {}) {
    const double rho = ball.center_norm();
    const double R = ball.radius;
    const int n = ball.dim();
    FactorResult out;

    if (p_i.is_one()) {
        if (v.is_power()) {
            const double c = -v.power_exponent();
            out.value = sup_power_kernel(c, theta, rho, R, R) / v.coefficient();
            if (std::isinf(out.value))
                out.reason = c > theta ? "sup_grows_at_infinity" : "v_inverse_unbounded_at_origin";
            return out;
        }
        const double c0 = -v.exponent_near_zero();
        const double cinf = -v.exponent_at_infinity();
        if (c0 < 0.0 && rho >= R) {  // origin lies in the complement
            out.reason = "v_inverse_unbounded_at_origin";
            return out;
        }
        if (cinf > theta) {
            out.reason = "sup_grows_at_infinity";
            return out;
        }
        out.value = detail::log_grid_sup(
            [&](double r) {
                const double t = std::max(std::abs(rho - r), R);  // nearest admissible distance
                return (1.0 / v(r)) * std::pow(R + t, -theta);
            },
            R * 1e-8, R * 1e8, pol.tab_grid, 3);
        return out;
    }

    const double pprime = p_i.conjugate().value();
    double s, tail;
    if (v.is_power()) {
        s = v.power_exponent() * pprime;
        tail = s;
    } else {
        s = v.exponent_near_zero() * pprime;
        tail = v.exponent_at_infinity() * pprime;
    }
    if (rho >= R && s >= static_cast<double>(n)) {
        out.reason = "v_pow_not_locally_integrable";
        return out;
    }
    if (!(theta * pprime + tail > static_cast<double>(n))) {
        out.reason = "nonintegrable_tail";
        return out;
    }
    auto f = [&](double r) { return v.is_power() ? std::pow(r, -s) : std::pow(v(r), -pprime); };
    const LadderResult lr =
        dyadic_ladder_integral(f, s, tail, rho, R, n, 0.0, theta * pprime, false, pol.ladder);
    out.value = std::pow(lr.value, 1.0 / pprime);
    if (v.is_power()) out.value /= v.coefficient();
    if (!lr.converged) out.reason = "tail_truncation_incomplete";
    return out;
}

namespace detail {

/// Shared assembly: prefactor and factor list -> ConditionValue.
inline ConditionValue assemble(const Ball& ball, ConditionId id, double prefactor,
                               std::vector<double> factors, std::string divergence) {
    ConditionValue cv;
    cv.ball = ball;
    cv.id = id;
    cv.prefactor = prefactor;
    cv.factors = std::move(factors);
    cv.divergence = std::move(divergence);
    cv.compose();
    if (std::isinf(cv.value) && cv.divergence.empty()) cv.divergence = "divergent_factor";
    return cv;
}

/// w^{-1}(B); divergence is mapped to prefactor 0 (the quotient vanishes on
/// such balls and cannot drive the sup).
inline double winv_or_zero_prefactor(const Weight& w, const Ball& ball, double numerator,
                                     std::string* note) {
    try {
        return numerator / inverse_weight_mass(w, ball);
    } catch (const divergence_error&) {
        *note = "winv_divergent";
        return 0.0;
    }
}

inline double inv_sup_on_range(const Weight& v, RadiusRange rng, const EvalPolicy& pol) {
    if (v.is_power())
        return sup_power_on_range(-v.power_exponent(), rng) / v.coefficient();
    return tab_inv_sup_on_range(v, rng, pol);
}

/// ( (1/|D|) * integral_D v^{-p'} )^{1/p'} over a ball D; +inf with reason on
/// divergence.
inline double avg_dual_power(const Weight& v, Exponent p_i, const Ball& D, const char** reason) {
    const double pprime = p_i.conjugate().value();
    try {
        const double mass = weight_pow_ball_integral(v, -pprime, D);
        return std::pow(mass / D.volume(), 1.0 / pprime);
    } catch (const divergence_error&) {
        *reason = "v_pow_not_locally_integrable";
        return kInf;
    }
}

}  // namespace detail

/// Full two-weight functional with prefactor |B|^{1+(1-delta)/n} / w^{-1}(B).
inline ConditionValue hcal_value(const WeightPair& pair, const FracParams& prm,
                                 const Ball& ball, const EvalPolicy& pol = {}) {
    const KernelExponents ke = KernelExponents::from(prm);
    std::string note;
    const double vol = ball.volume();
    const double pre = detail::winv_or_zero_prefactor(
        pair.w, ball, std::pow(vol, 1.0 + (1.0 - prm.delta) / prm.n), &note);
    std::vector<double> factors;
    factors.reserve(pair.v.size());
    for (std::size_t i = 0; i < pair.v.size(); ++i) {
        const FactorResult fr =
            kernel_factor(pair.v[i], prm.p_vec[i], ke.kernel_decay[i], ball, pol);
        factors.push_back(fr.value);
        if (fr.reason && note.empty()) note = fr.reason;
    }
    return detail::assemble(ball, ConditionId::hcal, pre, std::move(factors), std::move(note));
}

/// Variant with prefactor ||w chi_B||_inf / |B|^{(delta-1)/n}.
inline ConditionValue hbb_value(const WeightPair& pair, const FracParams& prm,
                                const Ball& ball, const EvalPolicy& pol = {}) {
    const KernelExponents ke = KernelExponents::from(prm);
    std::string note;
    const double wsup = weight_ess_sup_ball(pair.w, ball, pol);
    if (std::isinf(wsup)) note = "w_ess_sup_infinite";
    const double pre = wsup * std::pow(ball.volume(), (1.0 - prm.delta) / prm.n);
    std::vector<double> factors;
    for (std::size_t i = 0; i < pair.v.size(); ++i) {
        const FactorResult fr =
            kernel_factor(pair.v[i], prm.p_vec[i], ke.kernel_decay[i], ball, pol);
        factors.push_back(fr.value);
        if (fr.reason && note.empty()) note = fr.reason;
    }
    return detail::assemble(ball, ConditionId::hbb, pre, std::move(factors), std::move(note));
}

/// Inside-ball condition: |B|^{1-delta/n+gamma/n-1/p} / w^{-1}(B) times plain
/// sups on the p_i = 1 slots and ball averages on the p_i > 1 slots.
inline ConditionValue local_value(const WeightPair& pair, const FracParams& prm,
                                  const Ball& ball, const EvalPolicy& pol = {}) {
    std::string note;
    const double vol = ball.volume();
    const double expo = 1.0 - prm.delta / prm.n + prm.gamma / prm.n - prm.p_recip;
    const double pre = detail::winv_or_zero_prefactor(pair.w, ball, std::pow(vol, expo), &note);
    const RadiusRange rng = radius_range_ball(ball.center_norm(), ball.radius);
    std::vector<double> factors(pair.v.size(), 1.0);
    for (std::size_t i : prm.unit_idx) {
        factors[i] = detail::inv_sup_on_range(pair.v[i], rng, pol);
        if (std::isinf(factors[i]) && note.empty()) note = "v_inverse_unbounded";
    }
    for (std::size_t i : prm.dual_idx) {
        const char* reason = nullptr;
        factors[i] = detail::avg_dual_power(pair.v[i], prm.p_vec[i], ball, &reason);
        if (reason && note.empty()) note = reason;
    }
    return detail::assemble(ball, ConditionId::local, pre, std::move(factors), std::move(note));
}

/// Tail condition: complement integrals/sups with prefactor
/// |B|^{1+(1-delta)/n} / w^{-1}(B).
inline ConditionValue global_value(const WeightPair& pair, const FracParams& prm,
                                   const Ball& ball, const EvalPolicy& pol = {}) {
    const KernelExponents ke = KernelExponents::from(prm);
    std::string note;
    const double vol = ball.volume();
    const double pre = detail::winv_or_zero_prefactor(
        pair.w, ball, std::pow(vol, 1.0 + (1.0 - prm.delta) / prm.n), &note);
    std::vector<double> factors;
    for (std::size_t i = 0; i < pair.v.size(); ++i) {
        const FactorResult fr =
            kernel_factor_complement(pair.v[i], prm.p_vec[i], ke.kernel_decay[i], ball, pol);
        factors.push_back(fr.value);
        if (fr.reason && note.empty()) note = fr.reason;
    }
    return detail::assemble(ball, ConditionId::global, pre, std::move(factors), std::move(note));
}

/// Mixed condition for a partition (I, J) of the p_i = 1 slots: sups over the
/// annulus 2B \ B on I, over B on J, averages over 2B on the p_i > 1 slots,
/// prefactor |B|^{1+(gamma-delta)/n-1/p} / w^{-1}(B).
inline ConditionValue mixed_value(const WeightPair& pair, const FracParams& prm,
                                  const Ball& ball, const std::vector<std::size_t>& annulus_part,
                                  const EvalPolicy& pol = {}) {
    std::string note;
    const double vol = ball.volume();
    const double expo = 1.0 + (prm.gamma - prm.delta) / prm.n - prm.p_recip;
    const double pre = detail::winv_or_zero_prefactor(pair.w, ball, std::pow(vol, expo), &note);
    const double rho = ball.center_norm();
    const RadiusRange ball_rng = radius_range_ball(rho, ball.radius);
    const RadiusRange ann_rng = radius_range_annulus(rho, ball.radius);
    const Ball twoB(ball.center, 2.0 * ball.radius);

    std::vector<double> factors(pair.v.size(), 1.0);
    for (std::size_t i : prm.unit_idx) {
        const bool on_annulus =
            std::find(annulus_part.begin(), annulus_part.end(), i) != annulus_part.end();
        factors[i] = detail::inv_sup_on_range(pair.v[i], on_annulus ? ann_rng : ball_rng, pol);
        if (std::isinf(factors[i]) && note.empty()) note = "v_inverse_unbounded";
    }
    for (std::size_t i : prm.dual_idx) {
        const char* reason = nullptr;
        factors[i] = detail::avg_dual_power(pair.v[i], prm.p_vec[i], twoB, &reason);
        if (reason && note.empty()) note = reason;
    }
    return detail::assemble(ball, ConditionId::mixed, pre, std::move(factors), std::move(note));
}

/// Related-weights functional for w = prod v_i: the full factors against
/// |B|^{(1-delta)/n}, divided by the ball average of prod v_i^{-1}.
inline ConditionValue related_weights_value(const std::vector<Weight>& v, const FracParams& prm,
                                            const Ball& ball, const EvalPolicy& pol = {}) {
    const KernelExponents ke = KernelExponents::from(prm);
    std::string note;
    const double vol = ball.volume();
    double rhs_avg;
    try {
        const Weight prod_inv = weight_product(v, -1.0);
        rhs_avg = weight_pow_ball_integral(prod_inv, 1.0, ball) / vol;
    } catch (const divergence_error&) {
        note = "product_inverse_divergent";
        rhs_avg = kInf;
    }
    const double pre = std::pow(vol, (1.0 - prm.delta) / prm.n) / rhs_avg;
    std::vector<double> factors;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const FactorResult fr = kernel_factor(v[i], prm.p_vec[i], ke.kernel_decay[i], ball, pol);
        factors.push_back(fr.value);
        if (fr.reason && note.empty()) note = fr.reason;
    }
    return detail::assemble(ball, ConditionId::related, pre, std::move(factors), std::move(note));
}

/// Uniform entry point (mixed uses the all-on-B partition by default).
inline ConditionValue condition_value(ConditionId id, const WeightPair& pair,
                                      const FracParams& prm, const Ball& ball,
                                      const EvalPolicy& pol = {}) {
    switch (id) {
        case ConditionId::hcal: return hcal_value(pair, prm, ball, pol);
        case ConditionId::hbb: return hbb_value(pair, prm, ball, pol);
        case ConditionId::local: return local_value(pair, prm, ball, pol);
        case ConditionId::global: return global_value(pair, prm, ball, pol);
        case ConditionId::mixed: return mixed_value(pair, prm, ball, {}, pol);
        case ConditionId::related: return related_weights_value(pair.v, prm, ball, pol);
    }
    throw std::logic_error("unreachable");
}

/// Analytic scaling degree e with value(lambda x_B, lambda R) =
/// lambda^e * value(x_B, R), for all-power pairs.
inline double condition_scale_degree(ConditionId id, const WeightPair& pair,
                                     const FracParams& prm) {
    if (!pair.all_power()) throw std::invalid_argument("scale degree needs power weights");
    const KernelExponents ke = KernelExponents::from(prm);
    const double aw = pair.w.is_power() ? pair.w.power_exponent() : 0.0;
    double sum_b = 0.0;
    for (const auto& vi : pair.v) sum_b += vi.power_exponent();
    switch (id) {
        case ConditionId::hcal:
        case ConditionId::hbb:
        case ConditionId::global: {
            double e = 1.0 - prm.delta + aw;
            for (std::size_t i = 0; i < pair.v.size(); ++i)
                e += prm.n * prm.p_vec[i].conjugate().reciprocal() -
                     pair.v[i].power_exponent() - ke.kernel_decay[i];
            return e;
        }
        case ConditionId::local:
        case ConditionId::mixed:
            return prm.gamma - prm.delta - prm.n_over_p() + aw - sum_b;
        case ConditionId::related:
            return prm.gamma - prm.n_over_p() - prm.delta;
    }
    throw std::logic_error("unreachable");
}

}  // namespace fraclip
