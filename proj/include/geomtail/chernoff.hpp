#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "geomtail/geometric_sum.hpp"

namespace geomtail {
namespace detail {

// log E[exp(-t X_i)] for X_i ~ Geom(p), t >= 0. Exists for all t >= 0.
inline double log_mgf_neg(double p, double t) noexcept {
    return std::log(p) - t - std::log1p(-(1.0 - p) * std::exp(-t));
}

// log E[exp(t X_i)]; finite only while (1-p) e^t < 1, i.e. t < -log(1-p).
// Returns +inf past the boundary, which golden-section treats as a barrier.
inline double log_mgf_pos(double p, double t) noexcept {
    const double q = (1.0 - p) * std::exp(t);
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return std::log(p) + t - std::log1p(-q);
}

// Golden-section minimizer of a unimodal f on [a, b]; stops when the bracket
// is narrower than tol and returns the best probed abscissa.
template <typename F>
double golden_section_min(F&& f, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

inline void require_pos_delta(double delta, const char* who) {
    if (!(delta > 0.0))
        throw std::invalid_argument(std::string(who) + ": delta must be > 0, got " +
                                    std::to_string(delta));
}

}  // namespace detail

// Numerically optimized Chernoff bound on P(X < E[X] - delta):
//   inf_{t > 0} exp(t (E - delta)) prod_i E[exp(-t X_i)].
// The log-objective is convex in t (a cumulant generating function plus a
// linear term), so golden-section search finds the global minimum. The
// analytic minimizer delta/s of the relaxed closed form is probed as well,
// which makes the result never exceed the closed-form bound.
inline double chernoff_lower_bound(const GeometricSumSpec& spec, double delta) {
    detail::require_pos_delta(delta, "chernoff_lower_bound");
    const double threshold = spec.mean() - delta;
    auto log_objective = [&](double t) {
        double acc = t * threshold;
        for (const double p : spec.probs()) acc += detail::log_mgf_neg(p, t);
        return acc;
    };
    const double t_relaxed = delta / spec.s_exact();
    const double t_hi = std::max(50.0, 1.125 * t_relaxed);
    double best = log_objective(detail::golden_section_min(log_objective, 0.0, t_hi, 1e-12));
    best = std::min(best, log_objective(t_relaxed));
    return std::clamp(std::exp(std::min(best, 0.0)), 0.0, 1.0);
}

// Numerically optimized Chernoff bound on P(X > E[X] + delta):
//   inf_t exp(-t (E + delta)) prod_i E[exp(t X_i)]
// over t in the mgf existence domain (0, -log(1 - h)), h = min p_i. The
// closed form effectively uses t = min(delta/(2s), h/2); both candidates are
// probed directly, so the optimized bound never exceeds the closed form.
// For h = 1 the domain is unbounded and the objective decreases forever
// (the true tail is 0); the search is capped, which keeps the result a
// valid, astronomically small upper bound.
inline double chernoff_upper_bound(const GeometricSumSpec& spec, double delta) {
    detail::require_pos_delta(delta, "chernoff_upper_bound");
    const double threshold = spec.mean() + delta;
    auto log_objective = [&](double t) {
        double acc = -t * threshold;
        for (const double p : spec.probs()) acc += detail::log_mgf_pos(p, t);
        return acc;
    };
    const double h = spec.min_prob();
    const double t_quad = delta / (2.0 * spec.s_exact());
    const double t_lin = h / 2.0;
    const double t_hi = h < 1.0 ? -std::log1p(-h) * (1.0 - 1e-9)
                                : std::max(50.0, 1.125 * t_quad);
    double best = log_objective(detail::golden_section_min(log_objective, 0.0, t_hi, 1e-12));
    if (t_quad < t_hi) best = std::min(best, log_objective(t_quad));
    if (t_lin < t_hi) best = std::min(best, log_objective(t_lin));
    return std::clamp(std::exp(std::min(best, 0.0)), 0.0, 1.0);
}

}  // namespace geomtail
