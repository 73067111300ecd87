#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace geomtail {
namespace detail {

// Compensated accumulator; keeps long sums of reciprocals accurate.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const noexcept { return sum; }
};

}  // namespace detail

// Sum of independent geometric random variables in the trials convention:
// X_i takes values in {1, 2, ...} with P(X_i = j) = p_i (1 - p_i)^(j-1),
// so E[X_i] = 1/p_i. Aggregates are cached at construction.
class GeometricSumSpec {
public:
    explicit GeometricSumSpec(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty())
            throw std::invalid_argument("GeometricSumSpec: needs at least one probability");
        detail::KahanSum mean, s;
        double h = 1.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            const double p = probs_[i];
            if (!(p > 0.0) || p > 1.0)
                throw std::invalid_argument("GeometricSumSpec: p[" + std::to_string(i) + "] = " +
                                            std::to_string(p) + " outside (0, 1]");
            mean.add(1.0 / p);
            s.add(1.0 / (p * p));
            h = std::min(h, p);
        }
        mean_ = mean.value();
        s_exact_ = s.value();
        min_prob_ = h;
    }

    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }

    double mean() const noexcept { return mean_; }          // E[X] = sum 1/p_i
    double s_exact() const noexcept { return s_exact_; }    // sum 1/p_i^2
    double min_prob() const noexcept { return min_prob_; }  // h = min p_i

private:
    std::vector<double> probs_;
    double mean_ = 0.0;
    double s_exact_ = 0.0;
    double min_prob_ = 1.0;
};

}  // namespace geomtail
