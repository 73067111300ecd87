#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomtail/geometric_sum.hpp"

namespace geomtail {

// Raised when a pmf request exceeds the desk-scale cell budget.
class OracleInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// t_max * n refusal threshold for the O(n * t_max) convolution.
inline constexpr std::int64_t kOracleCellBudget = 100'000'000;

// Exact distribution of X = sum of n geometrics, truncated at t_max.
// masses[t - support_start] = P(X = t); support_start = n since every
// summand is at least 1. The truncated probability is carried explicitly.
struct ExactPmf {
    std::int64_t support_start = 0;
    std::vector<double> masses;
    double residual = 0.0;          // P(X > t_max)
    bool residual_warning = false;  // residual > 0.01

    double mass_at(std::int64_t t) const noexcept {
        const std::int64_t i = t - support_start;
        if (i < 0 || i >= static_cast<std::int64_t>(masses.size())) return 0.0;
        return masses[static_cast<std::size_t>(i)];
    }

    // P(X <= t) within the truncation window.
    double cdf(std::int64_t t) const noexcept {
        detail::KahanSum acc;
        const std::int64_t last = std::min<std::int64_t>(
            t - support_start, static_cast<std::int64_t>(masses.size()) - 1);
        for (std::int64_t i = 0; i <= last; ++i) acc.add(masses[static_cast<std::size_t>(i)]);
        return std::min(acc.value(), 1.0);
    }
};

// Dynamic-programming convolution over summands:
//   m_{i+1}[t] = p * m_i[t-1] + (1-p) * m_{i+1}[t-1]
// (the last step succeeds, or summand i+1 wastes one step). One pass per
// summand, in place, O(t_max) memory.
inline ExactPmf exact_pmf(const GeometricSumSpec& spec, std::int64_t t_max) {
    const auto n = static_cast<std::int64_t>(spec.size());
    if (t_max < n)
        throw std::invalid_argument("exact_pmf: t_max = " + std::to_string(t_max) +
                                    " below the minimum support n = " + std::to_string(n));
    if (t_max > kOracleCellBudget / n)
        throw OracleInfeasibleError("exact_pmf: t_max * n = " + std::to_string(t_max) + " * " +
                                    std::to_string(n) + " exceeds the cell budget " +
                                    std::to_string(kOracleCellBudget));

    std::vector<double> dist(static_cast<std::size_t>(t_max) + 1, 0.0);
    dist[0] = 1.0;  // zero summands: point mass at 0
    for (const double p : spec.probs()) {
        double prev_old = 0.0;  // m_i[t-1]
        double prev_new = 0.0;  // m_{i+1}[t-1]
        for (std::size_t t = 0; t < dist.size(); ++t) {
            const double old = dist[t];
            dist[t] = p * prev_old + (1.0 - p) * prev_new;
            prev_old = old;
            prev_new = dist[t];
        }
    }

    ExactPmf pmf;
    pmf.support_start = n;
    pmf.masses.assign(dist.begin() + n, dist.end());
    detail::KahanSum total;
    for (const double m : pmf.masses) total.add(m);
    pmf.residual = std::clamp(1.0 - total.value(), 0.0, 1.0);
    pmf.residual_warning = pmf.residual > 0.01;
    return pmf;
}

// P(X > threshold), exact: the residual of the pmf truncated at
// floor(threshold). Thresholds below the minimum support return 1.
inline double exact_upper_tail(const GeometricSumSpec& spec, double threshold) {
    const auto n = static_cast<std::int64_t>(spec.size());
    if (threshold < static_cast<double>(n)) return 1.0;
    return exact_pmf(spec, static_cast<std::int64_t>(std::floor(threshold))).residual;
}

// P(X < threshold), exact: cdf at ceil(threshold) - 1.
inline double exact_lower_tail(const GeometricSumSpec& spec, double threshold) {
    const auto n = static_cast<std::int64_t>(spec.size());
    const auto t_hi = static_cast<std::int64_t>(std::ceil(threshold)) - 1;
    if (t_hi < n) return 0.0;
    const ExactPmf pmf = exact_pmf(spec, t_hi);
    detail::KahanSum acc;
    for (const double m : pmf.masses) acc.add(m);
    return std::min(acc.value(), 1.0);
}

}  // namespace geomtail
