#pragma once

#include <string>
#include <vector>

#include "fraclip/params.hpp"

namespace fraclip {

/// Raster of the admissibility classification over (1/p, delta) for one
/// gamma panel.  The grid is node-aligned so the boundary line, the cap
/// delta = 1 and the excluded corner land exactly on grid nodes.
struct RegionMapSpec {
    int n = 1;
    int m = 2;
    std::vector<double> gammas{0.5, 1.0, 1.5};
    int cells = 100;  // nodes per axis = cells + 1
    double delta_lo = -3.0;
    double delta_hi = 2.0;
};

struct RegionCell {
    double inv_p = 0.0;
    double delta = 0.0;
    Region label = Region::trivial;
};

inline std::vector<RegionCell> region_grid(double gamma, const RegionMapSpec& spec) {
    std::vector<RegionCell> cells;
    cells.reserve(static_cast<std::size_t>(spec.cells + 1) * (spec.cells + 1));
    for (int i = 0; i <= spec.cells; ++i) {
        const double inv_p = static_cast<double>(spec.m) * i / spec.cells;
        for (int j = 0; j <= spec.cells; ++j) {
            const double delta =
                spec.delta_lo + (spec.delta_hi - spec.delta_lo) * j / spec.cells;
            cells.push_back({inv_p, delta,
                             classify_region(delta, gamma - spec.n * inv_p)});
        }
    }
    return cells;
}

/// 1/p coordinate of the open corner (delta = gamma - n/p = 1), when it lies
/// on the panel; negative when absent.
inline double corner_inv_p(double gamma, const RegionMapSpec& spec) {
    const double ip = (gamma - 1.0) / spec.n;
    return (ip >= 0.0 && ip <= static_cast<double>(spec.m)) ? ip : -1.0;
}

}  // namespace fraclip
