#pragma once

#include <cmath>
#include <vector>

namespace fraclip {

inline std::vector<double> log_axis(double lo, double hi, int per_decade) {
    const double e_lo = std::log10(lo);
    const double decades = std::log10(hi) - e_lo;
    const int count = static_cast<int>(std::lround(decades * per_decade)) + 1;
    std::vector<double> axis(static_cast<std::size_t>(count < 2 ? 2 : count));
    for (std::size_t i = 0; i < axis.size(); ++i)
        axis[i] = std::pow(10.0, e_lo + static_cast<double>(i) / per_decade);
    return axis;
}

struct SlopeFit {
    double slope = 0.0;    // blow-up exponent convention where noted
    double ci_half = 0.0;  // 95% half-width
    int points = 0;
    bool valid = false;
};

namespace detail {

inline double t_quantile_975(int df) {
    static const double tab[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
    if (df < 1) return tab[0];
    if (df <= 30) return tab[df - 1];
    return 1.96 + 2.6 / df;
}

}  // namespace detail

/// Least squares of log y against log x (nonpositive/nonfinite y dropped).
inline SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    SlopeFit f;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::isfinite(y[i]) && y[i] > 0.0 && std::isfinite(x[i]) && x[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    const int k = static_cast<int>(lx.size());
    f.points = k;
    if (k < 3) return f;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < k; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    double rss = 0.0;
    for (int i = 0; i < k; ++i) {
        const double e = ly[i] - my - f.slope * (lx[i] - mx);
        rss += e * e;
    }
    const double se = std::sqrt(rss / (k > 2 ? k - 2 : 1) / sxx);
    f.ci_half = detail::t_quantile_975(k - 2) * se;
    f.valid = true;
    return f;
}

}  // namespace fraclip
