#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "cnsf/errors.hpp"

namespace cnsf {

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    int max_intervals = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745478430, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment &o) const { return error < o.error; }
};

template <class F>
Segment kronrod21(F &f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    std::array<double, 10> f1{}, f2{};
    for (int k = 0; k < 10; ++k) {
        const double dx = half * kKronrodNodes[k];
        f1[k] = f(center - dx);
        f2[k] = f(center + dx);
        const double pair = f1[k] + f2[k];
        kronrod += kKronrodWeights[k] * pair;
        abs_sum += kKronrodWeights[k] * (std::abs(f1[k]) + std::abs(f2[k]));
        if (k % 2 == 1)
            gauss += kGaussWeights[k / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[10] * std::abs(fc - mean);
    for (int k = 0; k < 10; ++k)
        asc += kKronrodWeights[k] * (std::abs(f1[k] - mean) + std::abs(f2[k] - mean));

    const double value = kronrod * half;
    double err = std::abs((kronrod - gauss) * half);
    const double resasc = asc * std::abs(half);
    const double resabs = abs_sum * std::abs(half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, value, err};
}

} // namespace detail

/**
 * Globally adaptive Gauss-Kronrod (21-point) integration of f over [a, b].
 *
 * Interior `breakpoints` (kinks or jumps of f) split the initial partition;
 * points outside (a, b) are ignored. The interval with the largest error
 * estimate is bisected until the total estimate is below
 * max(abs_tol, rel_tol * |value|). Throws ComputationError when
 * max_intervals is exhausted first.
 */
template <class F>
QuadratureResult integrate_adaptive(F &&f, double a, double b,
                                    std::span<const double> breakpoints = {},
                                    const QuadratureOptions &opts = {}) {
    QuadratureResult result;
    if (a == b)
        return result;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b)
            cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Segment> heap;
    double total = 0.0, total_err = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const detail::Segment s = detail::kronrod21(f, cuts[k], cuts[k + 1]);
        total += s.value;
        total_err += s.error;
        heap.push(s);
        result.evaluations += 21;
    }
    auto converged = [&] {
        return total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    };
    while (!converged()) {
        if (static_cast<int>(heap.size()) >= opts.max_intervals) {
            throw ComputationError("adaptive quadrature did not converge on [" +
                                   std::to_string(a) + ", " + std::to_string(b) +
                                   "]: error estimate " + std::to_string(total_err) +
                                   " after " + std::to_string(heap.size()) + " intervals");
        }
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ComputationError("adaptive quadrature: interval too small to bisect at " +
                                   std::to_string(worst.a));
        }
        const detail::Segment left = detail::kronrod21(f, worst.a, mid);
        const detail::Segment right = detail::kronrod21(f, mid, worst.b);
        result.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to drop accumulated update round-off.
    total = 0.0;
    total_err = 0.0;
    result.intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    result.value = sign * total;
    result.error = total_err;
    return result;
}

} // namespace cnsf
