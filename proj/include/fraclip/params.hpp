#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclip/exponent.hpp"

namespace fraclip {

/// Equal split of the order: gamma_i = gamma/m.  Valid whenever
/// 0 < gamma < m*n since then 0 < gamma/m < n.
inline std::vector<double> equal_order_split(double gamma, int m, int n) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!(gamma > 0.0) || !(gamma < static_cast<double>(m) * n))
        throw std::invalid_argument("order must satisfy 0 < gamma < m*n");
    return std::vector<double>(static_cast<std::size_t>(m), gamma / m);
}

inline void validate_order_split(const std::vector<double>& split, double gamma, int n) {
    double sum = 0.0;
    for (double g : split) {
        if (!(g > 0.0) || !(g < static_cast<double>(n)))
            throw std::invalid_argument("each gamma_i must satisfy 0 < gamma_i < n");
        sum += g;
    }
    if (std::abs(sum - gamma) > 1e-9 * std::max(1.0, std::abs(gamma)))
        throw std::invalid_argument("gamma split must sum to gamma");
}

/// All scalar parameters of the problem: dimension, multilinearity, order
/// and its split, smoothness, exponent vector, plus the derived aggregate
/// exponent and the partition of indices by p_i = 1 vs p_i > 1.
struct FracParams {
    int n = 1;
    int m = 1;
    double gamma = 0.5;
    std::vector<double> gamma_split;
    double delta = 0.0;
    std::vector<Exponent> p_vec;

    double p_recip = 0.0;                 // 1/p = sum 1/p_i
    std::vector<std::size_t> unit_idx;    // { i : p_i = 1 }
    std::vector<std::size_t> dual_idx;    // { i : p_i > 1 }

    static FracParams make(int n, int m, double gamma, double delta,
                           std::vector<Exponent> p_vec,
                           std::optional<std::vector<double>> split = std::nullopt) {
        if (n < 1) throw std::invalid_argument("n must be a positive integer");
        if (m < 1) throw std::invalid_argument("m must be a positive integer");
        if (static_cast<int>(p_vec.size()) != m)
            throw std::invalid_argument("p_vec must have m entries");
        FracParams prm;
        prm.n = n;
        prm.m = m;
        prm.gamma = gamma;
        prm.delta = delta;
        prm.p_vec = std::move(p_vec);
        if (split) {
            if (static_cast<int>(split->size()) != m)
                throw std::invalid_argument("gamma split must have m entries");
            prm.gamma_split = std::move(*split);
        } else {
            if (!(gamma > 0.0))
                throw std::invalid_argument("order must be positive");
            prm.gamma_split.assign(static_cast<std::size_t>(m), gamma / m);
        }
        // Relaxed bound gamma_i < n + 1/m keeps every kernel decay exponent
        // positive; the strict range gamma_i < n is checked where the
        // constructions require it (see standard_range()).
        double sum = 0.0;
        for (double gi : prm.gamma_split) {
            if (!(gi > 0.0) || !(gi < n + 1.0 / m))
                throw std::invalid_argument("each gamma_i must satisfy 0 < gamma_i < n + 1/m");
            sum += gi;
        }
        if (std::abs(sum - gamma) > 1e-9 * std::max(1.0, std::abs(gamma)))
            throw std::invalid_argument("gamma split must sum to gamma");
        prm.p_recip = aggregate_reciprocal(prm.p_vec);
        for (std::size_t i = 0; i < prm.p_vec.size(); ++i) {
            if (prm.p_vec[i].is_one())
                prm.unit_idx.push_back(i);
            else
                prm.dual_idx.push_back(i);
        }
        return prm;
    }

    double p_value() const {
        return p_recip == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / p_recip;
    }
    double n_over_p() const { return static_cast<double>(n) * p_recip; }
    std::size_t m1() const { return unit_idx.size(); }
    std::size_t m2() const { return dual_idx.size(); }

    /// True when 0 < gamma < m*n and every gamma_i < n (the range the
    /// operator and the example recipe are stated for).
    bool standard_range() const {
        if (!(gamma > 0.0) || !(gamma < static_cast<double>(m) * n)) return false;
        for (double gi : gamma_split)
            if (!(gi < static_cast<double>(n))) return false;
        return true;
    }
};

/// The two exponent families that share one symbol in the source material:
/// kernel_decay drives the shifted-kernel integrals, recipe_shift drives the
/// power-weight example construction.
struct KernelExponents {
    std::vector<double> kernel_decay;   // n - gamma_i + 1/m
    std::vector<double> recipe_shift;   // n/p_i + (1 - gamma)/m

    static KernelExponents from(const FracParams& prm) {
        KernelExponents ke;
        ke.kernel_decay.reserve(prm.gamma_split.size());
        ke.recipe_shift.reserve(prm.p_vec.size());
        const double invm = 1.0 / prm.m;
        for (double gi : prm.gamma_split)
            ke.kernel_decay.push_back(prm.n - gi + invm);
        for (const auto& p : prm.p_vec)
            ke.recipe_shift.push_back(prm.n * p.reciprocal() + (1.0 - prm.gamma) * invm);
        return ke;
    }
};

enum class Region { admissible, trivial, excluded_corner };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::admissible: return "admissible";
        case Region::trivial: return "trivial";
        case Region::excluded_corner: return "excluded_corner";
    }
    return "?";
}

/// Classify (delta, gamma - n/p).  Boundary ties count as admissible except
/// the corner delta = gamma - n/p = 1, which is excluded.
inline Region classify_region(double delta, double gamma_minus_n_over_p) {
    if (delta == 1.0 && gamma_minus_n_over_p == 1.0) return Region::excluded_corner;
    if (delta <= std::min(1.0, gamma_minus_n_over_p)) return Region::admissible;
    return Region::trivial;
}

inline Region classify_region(const FracParams& prm) {
    return classify_region(prm.delta, prm.gamma - prm.n_over_p());
}

}  // namespace fraclip
