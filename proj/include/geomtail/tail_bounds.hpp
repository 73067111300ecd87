#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "geomtail/geometric_sum.hpp"

namespace geomtail {

// Which branch of the bound produced the value. `linear` occurs only for the
// upper tail, when delta > s*h. `degenerate` marks delta = 0 (bound 1).
enum class TailRegime { quadratic, linear, degenerate };

constexpr const char* to_string(TailRegime r) noexcept {
    switch (r) {
        case TailRegime::quadratic: return "quadratic";
        case TailRegime::linear: return "linear";
        default: return "degenerate";
    }
}

struct TailBoundResult {
    double bound;  // probability, in [0, 1]
    TailRegime regime;
    double delta;
    double s_used;
    std::optional<double> h_used;  // empty for the lower tail
};

namespace detail {

inline void require_nonneg_delta(double delta, const char* who) {
    if (!(delta >= 0.0))
        throw std::invalid_argument(std::string(who) + ": delta must be >= 0, got " +
                                    std::to_string(delta));
}

// Overrides may only relax: s upward, h downward. Both bounds stay valid for
// any s >= sum 1/p_i^2 and any h <= min p_i.
inline double resolve_s(const GeometricSumSpec& spec, std::optional<double> s_override,
                        const char* who) {
    if (!s_override) return spec.s_exact();
    if (!(*s_override >= spec.s_exact()))
        throw std::invalid_argument(std::string(who) + ": s override " +
                                    std::to_string(*s_override) + " below exact sum 1/p_i^2 = " +
                                    std::to_string(spec.s_exact()));
    return *s_override;
}

inline double resolve_h(const GeometricSumSpec& spec, std::optional<double> h_override,
                        const char* who) {
    if (!h_override) return spec.min_prob();
    if (!(*h_override > 0.0) || *h_override > spec.min_prob())
        throw std::invalid_argument(std::string(who) + ": h override " +
                                    std::to_string(*h_override) + " outside (0, min p_i = " +
                                    std::to_string(spec.min_prob()) + "]");
    return *h_override;
}

}  // namespace detail

// P(X < E[X] - delta) <= exp(-delta^2 / (2 s)).
inline TailBoundResult lower_tail_bound(const GeometricSumSpec& spec, double delta,
                                        std::optional<double> s_override = {}) {
    detail::require_nonneg_delta(delta, "lower_tail_bound");
    const double s = detail::resolve_s(spec, s_override, "lower_tail_bound");
    if (delta == 0.0) return {1.0, TailRegime::degenerate, 0.0, s, {}};
    return {std::exp(-delta * delta / (2.0 * s)), TailRegime::quadratic, delta, s, {}};
}

// P(X > E[X] + delta) <= exp(-(delta/4) * min(delta/s, h)). The regime is
// quadratic for delta <= s*h and linear beyond; the two expressions coincide
// at the boundary.
inline TailBoundResult upper_tail_bound(const GeometricSumSpec& spec, double delta,
                                        std::optional<double> s_override = {},
                                        std::optional<double> h_override = {}) {
    detail::require_nonneg_delta(delta, "upper_tail_bound");
    const double s = detail::resolve_s(spec, s_override, "upper_tail_bound");
    const double h = detail::resolve_h(spec, h_override, "upper_tail_bound");
    if (delta == 0.0) return {1.0, TailRegime::degenerate, 0.0, s, h};
    const bool quadratic = delta <= s * h;
    const double log_bound = quadratic ? -delta * delta / (4.0 * s) : -delta * h / 4.0;
    return {std::exp(log_bound), quadratic ? TailRegime::quadratic : TailRegime::linear, delta, s,
            h};
}

// log(rhs) - log(lhs) of the inequality e^x / (1+x) <= e^(x^2/2), x >= 0.
// Nonnegative everywhere on the domain; zero only at x = 0.
inline double check_lemma2_part1(double x) {
    if (!(x >= 0.0))
        throw std::invalid_argument("check_lemma2_part1: x must be >= 0, got " +
                                    std::to_string(x));
    return x * x / 2.0 - x + std::log1p(x);
}

// log(rhs) - log(lhs) of e^(-x) / (1-x) <= e^(x^2 / (2-2x)) on [0, 1).
// The endpoint x = 1 is rejected: both sides diverge there.
inline double check_lemma2_part2(double x) {
    if (!(x >= 0.0) || x >= 1.0)
        throw std::invalid_argument("check_lemma2_part2: x must be in [0, 1), got " +
                                    std::to_string(x));
    return x * x / (2.0 - 2.0 * x) + x + std::log1p(-x);
}

// Earlier fitness-level tail bound, for side-by-side comparison: a process
// with expected running time E and worst-case expected waiting time w per
// improvement satisfies P(T > 2E + 2*delta*w) <= e^(-delta). Given a step
// budget, returns that bound; defined only for budgets >= 2E.
inline double zllh_comparison_bound(double expected_time, double worst_waiting_time,
                                    double budget) {
    if (!(expected_time > 0.0) || !(worst_waiting_time > 0.0))
        throw std::invalid_argument(
            "zllh_comparison_bound: expected_time and worst_waiting_time must be > 0");
    if (!(budget >= 2.0 * expected_time))
        throw std::invalid_argument("zllh_comparison_bound: budget " + std::to_string(budget) +
                                    " below 2 * expected_time = " +
                                    std::to_string(2.0 * expected_time) +
                                    "; the bound is undefined there");
    const double delta = (budget - 2.0 * expected_time) / (2.0 * worst_waiting_time);
    return std::exp(-delta);
}

}  // namespace geomtail
