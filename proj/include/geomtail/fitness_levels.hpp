#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geomtail/geometric_sum.hpp"
#include "geomtail/tail_bounds.hpp"

namespace geomtail {

// Fitness-level partition A_k < ... < A_m: level_probs[i] is a lower bound
// on the probability of leaving level k+i in one step. The waiting time at
// each level is then stochastically dominated by Geom(level_probs[i]).
// no_skip records the extra hypothesis that the level rises by at most one
// per step; the lower time bound is valid only under it.
class LevelPartition {
public:
    LevelPartition(std::vector<double> level_probs, std::int64_t start_level, bool no_skip)
        : spec_(std::move(level_probs)), start_level_(start_level), no_skip_(no_skip) {
        if (start_level_ < 0)
            throw std::invalid_argument("LevelPartition: start_level must be >= 0, got " +
                                        std::to_string(start_level_));
    }

    // One geometric per level: the waiting-time sum this partition induces.
    const GeometricSumSpec& spec() const noexcept { return spec_; }
    std::span<const double> level_probs() const noexcept { return spec_.probs(); }

    std::int64_t start_level() const noexcept { return start_level_; }
    std::int64_t end_level() const noexcept {
        return start_level_ + static_cast<std::int64_t>(spec_.size());
    }
    bool no_skip() const noexcept { return no_skip_; }

private:
    GeometricSumSpec spec_;
    std::int64_t start_level_;
    bool no_skip_;
};

enum class BoundDirection { upper, lower };

constexpr const char* to_string(BoundDirection d) noexcept {
    return d == BoundDirection::upper ? "upper" : "lower";
}

struct HittingTimeBound {
    double time_bound;  // steps
    double confidence;  // the bound holds with at least this probability
    BoundDirection direction;
    double delta;
    TailRegime regime;
};

// Hitting time from A_k to A_m is at most sum 1/p_i + delta with probability
// at least 1 - exp(-(delta/4) min(delta/s, h)).
inline HittingTimeBound upper_time_bound(const LevelPartition& part, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("upper_time_bound: delta must be > 0, got " +
                                    std::to_string(delta));
    const TailBoundResult tail = upper_tail_bound(part.spec(), delta);
    return {part.spec().mean() + delta, 1.0 - tail.bound, BoundDirection::upper, delta,
            tail.regime};
}

// Hitting time is at least sum 1/p_i - delta with probability at least
// 1 - exp(-delta^2 / (2s)). Valid only for non-skipping processes: the
// waiting-time sum lower-bounds the hitting time only when every level in
// the partition is actually visited.
inline HittingTimeBound lower_time_bound(const LevelPartition& part, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("lower_time_bound: delta must be > 0, got " +
                                    std::to_string(delta));
    if (!part.no_skip())
        throw std::invalid_argument(
            "lower_time_bound: partition allows level skipping; the lower bound does not apply");
    const TailBoundResult tail = lower_tail_bound(part.spec(), delta);
    return {std::max(0.0, part.spec().mean() - delta), 1.0 - tail.bound, BoundDirection::lower,
            delta, tail.regime};
}

// Smallest delta whose time bound holds with at least the target confidence,
// by inverting the closed-form tails. For the upper direction the quadratic
// inversion is used while it lands inside the quadratic regime, the linear
// inversion beyond.
inline double delta_for_confidence(const LevelPartition& part, double target_confidence,
                                   BoundDirection direction) {
    if (!(target_confidence > 0.0) || !(target_confidence < 1.0))
        throw std::invalid_argument("delta_for_confidence: target must be in (0, 1), got " +
                                    std::to_string(target_confidence));
    const double log_term = -std::log1p(-target_confidence);  // ln(1/(1-target))
    const double s = part.spec().s_exact();
    if (direction == BoundDirection::lower) return std::sqrt(2.0 * s * log_term);
    const double h = part.spec().min_prob();
    const double quadratic = std::sqrt(4.0 * s * log_term);
    return quadratic <= s * h ? quadratic : 4.0 * log_term / h;
}

}  // namespace geomtail
