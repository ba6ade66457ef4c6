#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fraclip {

/// Lebesgue exponent p in [1, inf], stored through its reciprocal so that
/// 1/p arithmetic is exact and p = inf needs no floating sentinel.
class Exponent {
public:
    Exponent() : recip_(1.0) {}

    static Exponent from_value(double p) {
        if (std::isinf(p) && p > 0) return Exponent(0.0);
        if (!(p >= 1.0) || std::isnan(p))
            throw std::invalid_argument("exponent must lie in [1, inf]");
        return Exponent(1.0 / p);
    }
    static Exponent infinity() { return Exponent(0.0); }
    static Exponent one() { return Exponent(1.0); }

    double reciprocal() const { return recip_; }
    double value() const {
        return recip_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / recip_;
    }
    bool is_infinite() const { return recip_ == 0.0; }
    bool is_one() const { return recip_ == 1.0; }

    /// Hoelder conjugate p' with 1/p + 1/p' = 1; p=1 -> inf, p=inf -> 1.
    Exponent conjugate() const { return Exponent(1.0 - recip_); }

    friend bool operator==(Exponent a, Exponent b) { return a.recip_ == b.recip_; }
    friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }

private:
    explicit Exponent(double recip) : recip_(recip) {}
    double recip_;
};

/// 1/p = sum 1/p_i.  Zero when every p_i = inf.
inline double aggregate_reciprocal(const std::vector<Exponent>& p_vec) {
    if (p_vec.empty()) throw std::invalid_argument("empty exponent vector");
    double s = 0.0;
    for (const auto& e : p_vec) s += e.reciprocal();
    return s;
}

/// Aggregate exponent p (may fall below 1); +inf when all p_i = inf.
inline double aggregate_exponent(const std::vector<Exponent>& p_vec) {
    const double r = aggregate_reciprocal(p_vec);
    return r == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / r;
}

}  // namespace fraclip
