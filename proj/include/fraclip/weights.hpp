#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclip/errors.hpp"
#include "fraclip/geometry.hpp"
#include "fraclip/params.hpp"
#include "fraclip/radial.hpp"

namespace fraclip {

/// Radial weight: exact power |x|^a or tabulated radial samples with
/// log-log interpolation (tabulated weights are flagged approximate; the
/// outermost segments extrapolate as power laws).
class Weight {
public:
    enum class Kind { power, tabulated };

    static Weight power(double exponent, double coef = 1.0) {
        if (!(coef > 0.0)) throw std::invalid_argument("weight coefficient must be positive");
        Weight w;
        w.kind_ = Kind::power;
        w.exponent_ = exponent;
        w.coef_ = coef;
        return w;
    }

    /// samples: (r, value) pairs, r > 0 strictly increasing, values > 0.
    static Weight tabulated(std::vector<std::array<double, 2>> samples) {
        if (samples.size() < 2) throw std::invalid_argument("tabulated weight needs >= 2 samples");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i][0] > 0.0) || !(samples[i][1] > 0.0))
                throw std::invalid_argument("tabulated samples must be positive");
            if (i > 0 && !(samples[i][0] > samples[i - 1][0]))
                throw std::invalid_argument("tabulated radii must increase");
        }
        Weight w;
        w.kind_ = Kind::tabulated;
        w.tab_ = std::make_shared<std::vector<std::array<double, 2>>>(std::move(samples));
        return w;
    }

    Kind kind() const { return kind_; }
    bool is_power() const { return kind_ == Kind::power; }
    bool approximate() const { return kind_ == Kind::tabulated; }
    double power_exponent() const {
        if (!is_power()) throw std::logic_error("not a power weight");
        return exponent_;
    }
    double coefficient() const { return coef_; }
    const std::vector<std::array<double, 2>>& samples() const { return *tab_; }

    double operator()(double r) const {
        if (is_power()) return coef_ * std::pow(r, exponent_);
        const auto& t = *tab_;
        if (r <= 0.0) r = t.front()[0] * 1e-12;
        const double lr = std::log(r);
        std::size_t hi = 1;
        while (hi + 1 < t.size() && t[hi][0] < r) ++hi;
        const double l0 = std::log(t[hi - 1][0]), l1 = std::log(t[hi][0]);
        const double v0 = std::log(t[hi - 1][1]), v1 = std::log(t[hi][1]);
        const double u = (lr - l0) / (l1 - l0);
        return std::exp(v0 + u * (v1 - v0));
    }

    /// Pointwise power w^s (exact for power weights).
    Weight to_power(double s) const {
        if (is_power()) return power(exponent_ * s, std::pow(coef_, s));
        auto t = *tab_;
        for (auto& p : t) p[1] = std::pow(p[1], s);
        return tabulated(std::move(t));
    }

    /// Power exponent near 0 (exact, or estimated from the inner segment).
    double exponent_near_zero() const {
        if (is_power()) return exponent_;
        const auto& t = *tab_;
        return (std::log(t[1][1]) - std::log(t[0][1])) /
               (std::log(t[1][0]) - std::log(t[0][0]));
    }

    /// Power exponent at infinity (exact, or estimated from the outer segment).
    double exponent_at_infinity() const {
        if (is_power()) return exponent_;
        const auto& t = *tab_;
        const std::size_t k = t.size() - 1;
        return (std::log(t[k][1]) - std::log(t[k - 1][1])) /
               (std::log(t[k][0]) - std::log(t[k - 1][0]));
    }

private:
    Kind kind_ = Kind::power;
    double exponent_ = 0.0;
    double coef_ = 1.0;
    std::shared_ptr<const std::vector<std::array<double, 2>>> tab_;
};

/// Pointwise product; exact for power inputs.
inline Weight weight_product(const std::vector<Weight>& ws, double each_power = 1.0) {
    bool all_power = true;
    for (const auto& w : ws) all_power = all_power && w.is_power();
    if (all_power) {
        double e = 0.0, c = 1.0;
        for (const auto& w : ws) {
            e += w.power_exponent() * each_power;
            c *= std::pow(w.coefficient(), each_power);
        }
        return Weight::power(e, c);
    }
    // Tabulate the product on a merged log grid.
    std::vector<double> radii;
    for (const auto& w : ws)
        if (!w.is_power())
            for (const auto& p : w.samples()) radii.push_back(p[0]);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<std::array<double, 2>> samples;
    samples.reserve(radii.size());
    for (double r : radii) {
        double v = 1.0;
        for (const auto& w : ws) v *= std::pow(w(r), each_power);
        samples.push_back({r, v});
    }
    return Weight::tabulated(std::move(samples));
}

/// The pair (w, v_1..v_m) under test.
struct WeightPair {
    Weight w = Weight::power(0.0);
    std::vector<Weight> v;

    bool all_power() const {
        if (!w.is_power()) return false;
        for (const auto& vi : v)
            if (!vi.is_power()) return false;
        return true;
    }
};

/// Integral of w^s over a ball (exact for powers, radial quadrature else).
inline double weight_pow_ball_integral(const Weight& w, double s, const Ball& ball) {
    if (w.is_power())
        return std::pow(w.coefficient(), s) * ball_integral_power(w.power_exponent() * s, ball);
    const Weight ws = w.to_power(s);
    const double e0 = ws.exponent_near_zero();
    if (e0 <= -static_cast<double>(ball.dim()) && ball.center_norm() <= ball.radius)
        throw divergence_error("tabulated weight power not integrable near the origin");
    return ball_radial_integral([&](double r) { return ws(r); }, std::max(0.0, -e0), ball);
}

// ---------------------------------------------------------------------------
// Power-weight class diagnostics.
// ---------------------------------------------------------------------------

/// RH_inf for |x|^a: the essential sup over any ball through the origin is
/// finite iff a >= 0, and then it is comparable to the ball average.
inline bool reverse_holder_infty_holds(double a, int n) {
    if (a <= -static_cast<double>(n)) return false;  // not a weight
    return a >= 0.0;
}

/// Doubling for |x|^a: holds exactly on the integrability range a > -n.
inline bool is_doubling_power(double a, int n) {
    return a > -static_cast<double>(n);
}

/// Max over a scale-sweep of mu(2B)/mu(B) for mu = |x|^a dx; evidence helper.
inline double doubling_ratio_sweep(double a, int n, int points = 200) {
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = std::pow(10.0, -4.0 + 8.0 * i / (points - 1.0));  // rho/R
        const Ball b = Ball::radial(t, 1.0, n);
        const Ball b2 = Ball::radial(t, 2.0, n);
        worst = std::max(worst, ball_integral_power(a, b2) / ball_integral_power(a, b));
    }
    return worst;
}

/// RH_s for |x|^a, s > 1: needs |x|^{as} locally integrable (a*s > -n), and
/// then the ratio sweep of the two averages is uniformly bounded.
inline bool reverse_holder_holds(double a, double s, int n, double* worst_ratio = nullptr) {
    if (!(s > 1.0)) throw std::invalid_argument("reverse Hoelder order must exceed 1");
    if (!(a * s > -static_cast<double>(n))) {
        if (worst_ratio) *worst_ratio = kInf;
        return false;
    }
    // Scale-invariant ratio; sweep rho/R and check stability under extension.
    auto ratio_at = [&](double t) {
        const Ball b = Ball::radial(t, 1.0, n);
        const double vol = b.volume();
        const double lhs = std::pow(ball_integral_power(a * s, b) / vol, 1.0 / s);
        const double rhs = ball_integral_power(a, b) / vol;
        return lhs / rhs;
    };
    double worst = ratio_at(0.0);
    for (int i = 0; i < 160; ++i)
        worst = std::max(worst, ratio_at(std::pow(10.0, -4.0 + 8.0 * i / 159.0)));
    double worst_ext = worst;
    for (int i = 0; i < 40; ++i)
        worst_ext = std::max(worst_ext, ratio_at(std::pow(10.0, 4.0 + 2.0 * i / 39.0)));
    if (worst_ratio) *worst_ratio = worst_ext;
    return worst_ext <= worst * 1.05 + 1e-12;
}

// ---------------------------------------------------------------------------
// Example construction for delta < gamma - m n.
// ---------------------------------------------------------------------------

/// Power pair w = |x|^alpha, v_i = |x|^{beta_i} together with the recipe's
/// free parameters.  Valid for delta < gamma - m n (other admissible deltas
/// are certified via the sup search instead of constructed).
struct RecipePair {
    WeightPair pair;
    std::vector<double> beta;  // per index
    double nu = 0.0;           // positive combination from the p_i > 1 slots
    double beta_unit = 0.0;    // shared magnitude used on the p_i = 1 slots
    double alpha = 0.0;        // exponent of w
};

/// `fraction` picks the position inside each open admissibility interval
/// (0.5 = midpoint, the default margin-maximizing choice).
inline RecipePair construct_member_pair(const FracParams& prm, double fraction = 0.5) {
    const double mn = static_cast<double>(prm.m) * prm.n;
    if (!(prm.delta < prm.gamma - mn))
        throw std::domain_error(
            "recipe requires delta < gamma - m*n; certify other regions via the sup search");
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1)");
    if (prm.m2() == 0 && prm.m1() > 0)
        throw std::domain_error(
            "recipe needs at least one p_i > 1; certify all-p_i=1 pairs via the sup search");

    const KernelExponents ke = KernelExponents::from(prm);
    RecipePair out;
    out.beta.assign(static_cast<std::size_t>(prm.m), 0.0);

    double nu = 0.0;
    for (std::size_t i : prm.dual_idx) {
        const double theta = ke.recipe_shift[i];
        const double hi = prm.n * prm.p_vec[i].conjugate().reciprocal();  // n/p_i'
        const double lo = theta < 0.0 ? -theta : 0.0;
        const double beta_i = lo + fraction * (hi - lo);
        out.beta[i] = beta_i;
        nu += theta < 0.0 ? beta_i + theta : beta_i;
    }
    out.nu = nu;

    if (prm.m1() > 0) {
        const double cap = std::min(nu / static_cast<double>(prm.m1()),
                                    prm.n + (1.0 - prm.gamma) / prm.m);
        out.beta_unit = fraction * cap;
        for (std::size_t i : prm.unit_idx) out.beta[i] = -out.beta_unit;
    }

    double beta_sum = 0.0;
    for (double b : out.beta) beta_sum += b;
    out.alpha = prm.delta + beta_sum + prm.n_over_p() - prm.gamma;

    out.pair.w = Weight::power(out.alpha);
    out.pair.v.reserve(out.beta.size());
    for (double b : out.beta) out.pair.v.push_back(Weight::power(b));
    return out;
}

}  // namespace fraclip
