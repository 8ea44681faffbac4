#pragma once

#include <array>
#include <cmath>
#include <span>

namespace cnsf {

/// Directions shorter than this (mm) are treated as delta functions and dropped.
inline constexpr double kDegeneracyEpsilon = 1e-9;

/// One-sided power: step for degree 0 (right-continuous, u(0) = 1), max(x, 0)^k otherwise.
double truncated_power(double x, int degree);

/**
 * Canonical set of 1 to 3 univariate box-spline directions.
 *
 * All stored directions are strictly positive; construct through
 * canonicalize().
 */
class DirectionSet {
  public:
    int size() const { return size_; }
    double operator[](int i) const { return dirs_[i]; }
    std::span<const double> directions() const { return {dirs_.data(), std::size_t(size_)}; }
    double sum() const {
        double total = 0.0;
        for (int i = 0; i < size_; ++i)
            total += dirs_[i];
        return total;
    }

  private:
    friend DirectionSet canonicalize(std::span<const double> raw, double epsilon);
    friend DirectionSet canonicalize3(double a, double b, double c, double epsilon) noexcept;
    std::array<double, 3> dirs_{};
    int size_ = 0;
};

/// Absolute values of `raw` with entries below epsilon removed.
/// Throws ValidationError for 0 or more than 3 inputs, or when nothing survives.
DirectionSet canonicalize(std::span<const double> raw, double epsilon = kDegeneracyEpsilon);

/// Non-throwing variant for hot loops; the result may be empty.
inline DirectionSet canonicalize3(double a, double b, double c,
                                  double epsilon = kDegeneracyEpsilon) noexcept {
    DirectionSet d;
    for (double x : {a, b, c}) {
        x = std::abs(x);
        if (x >= epsilon)
            d.dirs_[d.size_++] = x;
    }
    return d;
}

/**
 * Centered box spline with the directions in `dirs`, evaluated at x.
 *
 * Evaluated as forward differences of the truncated power of degree n-1:
 * M(x) = sum_S (-1)^|S| (x + sum(a)/2 - sum_S a)_+^(n-1) / ((n-1)! prod a).
 * Support is [-sum(a)/2, sum(a)/2), integral is 1. An empty set evaluates
 * to 0.
 */
inline double eval_centered_unchecked(const DirectionSet &dirs, double x) noexcept {
    const int n = dirs.size();
    if (n == 0)
        return 0.0;
    const double half = 0.5 * dirs.sum();
    if (x < -half || x >= half)
        return 0.0;
    const double shifted = x + half;
    double acc = 0.0;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
        prod *= dirs[i];
    for (int mask = 0; mask < (1 << n); ++mask) {
        double arg = shifted;
        int parity = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) {
                arg -= dirs[i];
                parity ^= 1;
            }
        }
        double term;
        if (n == 1)
            term = arg >= 0.0 ? 1.0 : 0.0;
        else if (arg <= 0.0)
            term = 0.0;
        else
            term = n == 2 ? arg : arg * arg;
        acc += parity ? -term : term;
    }
    const double factorial = n == 3 ? 2.0 : 1.0;
    return acc / (factorial * prod);
}

/// As eval_centered_unchecked, but throws ValidationError for an empty set.
double eval_centered(const DirectionSet &dirs, double x);

} // namespace cnsf
