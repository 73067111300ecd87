#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomtail/fitness_levels.hpp"
#include "geomtail/geometric_sum.hpp"

namespace geomtail {

inline constexpr double kEulerGamma = 0.5772156649015329;

// H_m = sum_{i=1}^m 1/i, accumulated smallest term first.
inline double harmonic(std::int64_t m) {
    if (m < 1)
        throw std::invalid_argument("harmonic: m must be >= 1, got " + std::to_string(m));
    double sum = 0.0;
    for (std::int64_t i = m; i >= 1; --i) sum += 1.0 / static_cast<double>(i);
    return sum;
}

// Leading asymptotic form ln m + gamma of H_m.
inline double harmonic_asymptotic(std::int64_t m) {
    if (m < 1)
        throw std::invalid_argument("harmonic_asymptotic: m must be >= 1, got " +
                                    std::to_string(m));
    return std::log(static_cast<double>(m)) + kEulerGamma;
}

// Fitness levels of single-bit-flip search on OneMax: leaving level i needs
// one of the n - i zero bits to flip, probability (n - i) / n. These are the
// exact per-level leave probabilities, and the process never skips a level.
inline LevelPartition onemax_partition(std::int64_t n, std::int64_t start_level) {
    if (n < 1)
        throw std::invalid_argument("onemax_partition: n must be >= 1, got " + std::to_string(n));
    if (start_level < 0 || start_level >= n)
        throw std::invalid_argument("onemax_partition: start level " +
                                    std::to_string(start_level) + " outside [0, " +
                                    std::to_string(n) + ")");
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(n - start_level));
    for (std::int64_t i = start_level; i < n; ++i)
        probs.push_back(static_cast<double>(n - i) / static_cast<double>(n));
    return LevelPartition(std::move(probs), start_level, /*no_skip=*/true);
}

// Relaxed variance proxy n^2 pi^2 / 6 >= sum 1/p_i^2 = n^2 sum_{j<=n-k} 1/j^2,
// valid for every start level.
inline double onemax_s_relaxed(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("onemax_s_relaxed: n must be >= 1, got " + std::to_string(n));
    const double nd = static_cast<double>(n);
    return nd * nd * std::numbers::pi * std::numbers::pi / 6.0;
}

// Smallest leave probability: the last level improves with probability 1/n.
inline double onemax_h(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("onemax_h: n must be >= 1, got " + std::to_string(n));
    return 1.0 / static_cast<double>(n);
}

struct RuntimeBand {
    double lower;
    double upper;
    bool omits_sublinear_terms;  // o(n) corrections are not included
};

// Asymptotic band for E[T] under uniform initialization:
// n ln n + n (gamma - ln 2) + o(n), with gamma - ln 2 bracketed by
// [-0.11594, -0.11593]. The o(n) part is flagged, not estimated.
inline RuntimeBand expected_runtime_band(std::int64_t n) {
    if (n < 2)
        throw std::invalid_argument("expected_runtime_band: n must be >= 2, got " +
                                    std::to_string(n));
    const double base = static_cast<double>(n) * std::log(static_cast<double>(n));
    const double nd = static_cast<double>(n);
    return {base - 0.11594 * nd, base - 0.11593 * nd, true};
}

// Exact E[T] under uniform initialization: conditioning on the binomial
// start level K ~ Bin(n, 1/2), E[T] = 1 + sum_k P(K = k) * n * H_{n-k}.
// Binomial weights are evaluated in log space; 2^-n underflows directly
// for n of a few thousand.
inline double exact_expected_runtime(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("exact_expected_runtime: n must be >= 1, got " +
                                    std::to_string(n));
    std::vector<double> prefix_harmonic(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t j = 1; j <= n; ++j)
        prefix_harmonic[static_cast<std::size_t>(j)] =
            prefix_harmonic[static_cast<std::size_t>(j - 1)] + 1.0 / static_cast<double>(j);

    const double log_gamma_n1 = std::lgamma(static_cast<double>(n) + 1.0);
    const double n_log2 = static_cast<double>(n) * std::numbers::ln2;
    detail::KahanSum acc;
    for (std::int64_t k = 0; k <= n; ++k) {
        const double log_weight = log_gamma_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
                                  std::lgamma(static_cast<double>(n - k) + 1.0) - n_log2;
        acc.add(std::exp(log_weight) * static_cast<double>(n) *
                prefix_harmonic[static_cast<std::size_t>(n - k)]);
    }
    return 1.0 + acc.value();
}

namespace detail {

inline void require_onemax_tail_args(std::int64_t n, double r, const char* who) {
    if (n < 1)
        throw std::invalid_argument(std::string(who) + ": n must be >= 1, got " +
                                    std::to_string(n));
    if (!(r > 0.0))
        throw std::invalid_argument(std::string(who) + ": r must be > 0, got " +
                                    std::to_string(r));
}

}  // namespace detail

// P(T <= E[T] - r n) <= exp(-3 r^2 / pi^2): the generic lower tail with the
// deviation r n and the relaxed s = n^2 pi^2 / 6 substituted in.
inline double onemax_lower_tail(std::int64_t n, double r) {
    detail::require_onemax_tail_args(n, r, "onemax_lower_tail");
    const double pi_sq = std::numbers::pi * std::numbers::pi;
    return std::exp(-(3.0 * r * r) / pi_sq);
}

// P(T >= E[T] + r n) <= exp(-3 r^2 / (2 pi^2)) while r <= pi^2 / 6, and
// exp(-r / 4) beyond: the generic upper tail with delta = r n, the relaxed
// s, and h = 1/n. The branch point r = pi^2/6 is delta = s h.
inline double onemax_upper_tail(std::int64_t n, double r) {
    detail::require_onemax_tail_args(n, r, "onemax_upper_tail");
    const double pi_sq = std::numbers::pi * std::numbers::pi;
    if (r <= pi_sq / 6.0) return std::exp(-(3.0 * r * r) / (2.0 * pi_sq));
    return std::exp(-r / 4.0);
}

}  // namespace geomtail
