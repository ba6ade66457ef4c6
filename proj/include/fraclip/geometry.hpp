#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "fraclip/errors.hpp"

namespace fraclip {

inline constexpr double kPi = 3.14159265358979323846;

/// Volume of the unit ball; dimensions 1 and 2 are the supported desk scale.
inline double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return kPi;
    }
    throw desk_scale_error("geometry supports n in {1, 2}");
}

/// Point in R^n, n <= 2.
struct Point {
    std::array<double, 2> c{0.0, 0.0};
    int dim = 1;

    static Point d1(double x) { return Point{{x, 0.0}, 1}; }
    static Point d2(double x, double y) { return Point{{x, y}, 2}; }
    static Point axis(double value, int n) {
        return n == 1 ? d1(value) : d2(value, 0.0);
    }

    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    double norm() const {
        return dim == 1 ? std::abs(c[0]) : std::hypot(c[0], c[1]);
    }
};

inline double dist(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
    return a.dim == 1 ? std::abs(a.c[0] - b.c[0])
                      : std::hypot(a.c[0] - b.c[0], a.c[1] - b.c[1]);
}

/// Euclidean ball B(x_B, R).  Measures use the Lebesgue volume; shifted
/// kernels use the radius as the length scale (comparable to |B|^{1/n}).
struct Ball {
    Point center;
    double radius = 1.0;

    Ball() = default;
    Ball(Point c, double r) : center(c), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    }
    static Ball radial(double center_norm, double r, int n) {
        return Ball(Point::axis(center_norm, n), r);
    }

    int dim() const { return center.dim; }
    double volume() const { return unit_ball_volume(dim()) * std::pow(radius, dim()); }
    double scale() const { return radius; }
    double center_norm() const { return center.norm(); }
    bool contains(const Point& p) const { return dist(center, p) < radius; }
};

using Rng = std::mt19937_64;

/// Open ball intersected with the closed coordinate quadrant from its anchor
/// (orient = +1: components >= anchor, -1: components <= anchor).
struct QuadrantBall {
    Point anchor;
    double radius = 1.0;
    int orient = -1;

    bool contains(const Point& p) const {
        if (p.dim != anchor.dim) return false;
        for (int d = 0; d < p.dim; ++d) {
            const double h = p[d] - anchor[d];
            if (orient > 0 ? h < 0.0 : h > 0.0) return false;
        }
        return dist(p, anchor) < radius;
    }

    /// Rejection sampling from the anchor-corner box; acceptance >= pi/4.
    Point sample(Rng& rng) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (;;) {
            Point p = anchor;
            for (int d = 0; d < anchor.dim; ++d)
                p[d] = anchor[d] + orient * radius * u(rng);
            if (dist(p, anchor) < radius) return p;
        }
    }
};

/// The corner sets attached to a ball: the closed positive quadrant from the
/// center, a small quadrant-ball C1 of radius R/(12 sqrt n) and a larger one
/// C2 of radius 2R/3 anchored R/(3 sqrt n) below the center along (1,...,1).
struct CornerSets {
    Point ball_center;
    double ball_radius = 1.0;
    QuadrantBall c1;
    QuadrantBall c2;

    bool in_quadrant(const Point& p) const {
        for (int d = 0; d < p.dim; ++d)
            if (p[d] < ball_center[d]) return false;
        return true;
    }

    /// Draw from the positive quadrant with per-coordinate offsets h_d =
    /// R * 10^U[-lo_decades, hi_decades]; occasionally pins a coordinate to 0.
    Point sample_quadrant(Rng& rng, double lo_decades = 3.0, double hi_decades = 3.0) const {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Point p = ball_center;
        for (int d = 0; d < p.dim; ++d) {
            if (u(rng) < 0.05) continue;  // boundary face h_d = 0
            const double e = -lo_decades + (lo_decades + hi_decades) * u(rng);
            p[d] = ball_center[d] + ball_radius * std::pow(10.0, e);
        }
        return p;
    }
};

inline CornerSets make_corner_sets(const Ball& ball, int n) {
    if (ball.dim() != n) throw std::invalid_argument("ball dimension mismatch");
    const double sqn = std::sqrt(static_cast<double>(n));
    const double r1 = ball.radius / (12.0 * sqn);
    const double off2 = ball.radius / (3.0 * sqn);

    CornerSets cs;
    cs.ball_center = ball.center;
    cs.ball_radius = ball.radius;
    cs.c1.anchor = ball.center;
    cs.c2.anchor = ball.center;
    for (int d = 0; d < n; ++d) {
        cs.c1.anchor[d] -= r1;
        cs.c2.anchor[d] -= off2;
    }
    cs.c1.radius = r1;
    cs.c2.radius = 2.0 * ball.radius / 3.0;
    cs.c1.orient = -1;
    cs.c2.orient = -1;
    return cs;
}

}  // namespace fraclip
