#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod integration and Gaussian quadrature rules.
 *
 * The adaptive integrator is a G7/K15 worst-interval-first subdivision with
 * caller-supplied breakpoints (used to isolate the non-smooth points of
 * |p(t)| trajectories). Gauss-Hermite / Legendre / Laguerre rules are built
 * by Golub-Welsch from the Jacobi recurrence.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"

namespace simqg {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   ///< estimated absolute error
    bool converged = false;
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
inline constexpr double kron_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kron_w[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

/// One G7/K15 panel; K15 value plus a QUADPACK-style sharpened error.
template <typename F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
    const double hc = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - hc * kron_x[i]);
        fv[14 - i] = f(mid + hc * kron_x[i]);
    }
    fv[7] = f(mid);
    NeumaierSum k15, g7;
    for (int i = 0; i < 7; ++i) {
        k15.add(kron_w[i] * (fv[i] + fv[14 - i]));
        if (i % 2 == 1) g7.add(gauss_w[i / 2] * (fv[i] + fv[14 - i]));
    }
    k15.add(kron_w[7] * fv[7]);
    g7.add(gauss_w[3] * fv[7]);
    value = hc * k15.value();
    const double diff = std::abs(hc * (k15.value() - g7.value()));
    const double sharpened = std::pow(200.0 * diff, 1.5);
    err = std::min(diff, sharpened);
}

} // namespace detail

/**
 * Adaptive integral of f on [a, b].
 *
 * @param breakpoints interior points where subdivision is forced up front
 *                    (kinks of the integrand); points outside (a,b) ignored.
 * Throws ConvergenceError (carrying the best estimate) if the tolerance is
 * not met within max_intervals panels.
 */
template <typename F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    double abs_tol = 1e-12, double rel_tol = 1e-10,
                                    const std::vector<double>& breakpoints = {},
                                    int max_intervals = 4000) {
    QuadratureResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    struct Interval {
        double a, b, value, error;
        bool operator<(const Interval& o) const { return error < o.error; }
    };

    std::vector<double> edges;
    edges.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Interval> heap;
    int count = 0;
    double value_sum = 0.0, err_sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Interval iv{edges[i], edges[i + 1], 0.0, 0.0};
        detail::gk15(f, iv.a, iv.b, iv.value, iv.error);
        value_sum += iv.value;
        err_sum += iv.error;
        heap.push(iv);
        ++count;
    }

    auto tol = [&](double v) { return std::max(abs_tol, rel_tol * std::abs(v)); };

    while (err_sum > tol(value_sum) && count < max_intervals) {
        Interval worst = heap.top();
        heap.pop();
        Interval left{worst.a, 0.5 * (worst.a + worst.b), 0.0, 0.0};
        Interval right{left.b, worst.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        value_sum += (left.value + right.value) - worst.value;
        err_sum += (left.error + right.error) - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }

    // final compensated re-sum over the interval set
    NeumaierSum vs, es;
    while (!heap.empty()) {
        vs.add(heap.top().value);
        es.add(heap.top().error);
        heap.pop();
    }
    res.value = vs.value();
    res.error = es.value();
    res.intervals = count;
    res.converged = res.error <= tol(res.value);
    if (!res.converged)
        throw ConvergenceError("adaptive quadrature failed to reach tolerance",
                               res.value, res.error);
    return res;
}

/// Nodes/weights of an n-point Gaussian rule for a classical weight.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

enum class GaussKind { Hermite, Legendre, Laguerre };

/// Golub-Welsch from the symmetric Jacobi recurrence. Rules are cached.
inline const GaussRule& gauss_rule(GaussKind kind, int n) {
    static std::map<std::pair<int, int>, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(static_cast<int>(kind), n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (n < 1) throw DomainError("gauss_rule: order must be >= 1");

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max(n - 1, 1));
    double mu0 = 0.0;
    switch (kind) {
    case GaussKind::Hermite: // weight e^{-x^2} on (-inf, inf)
        for (int i = 1; i < n; ++i) sub[i - 1] = std::sqrt(i / 2.0);
        mu0 = std::sqrt(M_PI);
        break;
    case GaussKind::Legendre: // weight 1 on [-1, 1]
        for (int i = 1; i < n; ++i) sub[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
        mu0 = 2.0;
        break;
    case GaussKind::Laguerre: // weight e^{-x} on [0, inf)
        for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
        for (int i = 1; i < n; ++i) sub[i - 1] = static_cast<double>(i);
        mu0 = 1.0;
        break;
    }

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    if (n == 1) {
        rule.x[0] = diag[0];
        rule.w[0] = mu0;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
        for (int i = 0; i < n; ++i) {
            rule.x[i] = es.eigenvalues()[i];
            const double v0 = es.eigenvectors()(0, i);
            rule.w[i] = mu0 * v0 * v0;
        }
    }
    auto [pos, ok] = cache.emplace(key, std::move(rule));
    (void)ok;
    return pos->second;
}

} // namespace simqg
