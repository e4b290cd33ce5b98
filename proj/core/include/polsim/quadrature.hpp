#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod integration of complex-valued
// functions on a finite interval, with optional interior breakpoints.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <queue>
#include <span>
#include <vector>

#include "polsim/errors.hpp"

namespace polsim {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_intervals = 5000;
};

struct QuadratureResult {
    std::complex<double> value;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights attached to kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    std::complex<double> value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const std::complex<double> fc = f(centre);
    std::complex<double> kronrod = fc * kronrod_weights[7];
    std::complex<double> gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const std::complex<double> sum = f(centre - dx) + f(centre + dx);
        kronrod += kronrod_weights[j] * sum;
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Integrates f over [a, b]; breakpoints outside (a, b) are ignored. Throws
// QuadratureError when the interval budget is exhausted before the
// tolerance max(abs_tol, rel_tol |I|) is met.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                           const QuadratureOptions& options = {}) {
    QuadratureResult result;
    if (a == b) return result;
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);

    std::vector<double> cuts{lo};
    for (double p : breakpoints) {
        if (p > lo && p < hi) cuts.push_back(p);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Segment> heap;
    std::complex<double> total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        detail::Segment s = detail::gk15(f, cuts[i], cuts[i + 1]);
        total += s.value;
        total_error += s.error;
        heap.push(s);
    }
    int evaluations = 15 * static_cast<int>(heap.size());

    auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (total_error > tolerance()) {
        if (static_cast<int>(heap.size()) >= options.max_intervals) {
            throw QuadratureError("adaptive quadrature did not converge", total_error);
        }
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureError("adaptive quadrature reached interval resolution limit", total_error);
        }
        const detail::Segment left = detail::gk15(f, worst.a, mid);
        const detail::Segment right = detail::gk15(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves to avoid drift from the running updates.
    std::complex<double> resummed = 0.0;
    double err = 0.0;
    result.intervals = static_cast<int>(heap.size());
    while (!heap.empty()) {
        resummed += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    result.value = sign * resummed;
    result.error = err;
    result.evaluations = evaluations;
    return result;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, std::initializer_list<double> breakpoints,
                           const QuadratureOptions& options = {}) {
    return integrate(std::forward<F>(f), a, b, std::span<const double>(breakpoints.begin(), breakpoints.size()),
                     options);
}

}  // namespace polsim
