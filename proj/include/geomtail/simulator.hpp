#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "geomtail/fitness_levels.hpp"
#include "geomtail/rng.hpp"

namespace geomtail {

inline constexpr std::uint64_t kDefaultIterationCap = 10'000'000'000ULL;

// A single run exceeded its iteration cap. Carries enough context to
// reproduce the offending run.
class IterationCapError : public std::runtime_error {
public:
    IterationCapError(std::uint64_t cap, std::uint64_t seed, std::int64_t replication = -1)
        : std::runtime_error(compose(cap, seed, replication)),
          cap_(cap),
          seed_(seed),
          replication_(replication) {}

    std::uint64_t cap() const noexcept { return cap_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::int64_t replication() const noexcept { return replication_; }  // -1 outside replicate()

private:
    static std::string compose(std::uint64_t cap, std::uint64_t seed, std::int64_t replication) {
        std::string msg = "iteration cap " + std::to_string(cap) + " exceeded (run seed " +
                          std::to_string(seed) + ")";
        if (replication >= 0) msg += " in replication " + std::to_string(replication);
        return msg;
    }

    std::uint64_t cap_;
    std::uint64_t seed_;
    std::int64_t replication_;
};

struct RunRecord {
    std::uint64_t seed;           // per-run RNG seed
    std::int64_t n;               // bits / coupon types / target level
    std::int64_t start_level;     // initial fitness, prefilled coupons, or chain start
    std::uint64_t hitting_time;   // T = 1 + iterations until the target
};

// Start state for rls_run: a uniform random string, or a uniformly chosen
// string with exactly `level` one-bits.
struct InitPolicy {
    static constexpr InitPolicy uniform() noexcept { return {false, 0}; }
    static constexpr InitPolicy fixed_level(std::int64_t level) noexcept { return {true, level}; }

    bool fixed;
    std::int64_t level;
};

// Black-box pseudo-Boolean fitness: string value plus the stopping value.
template <typename F>
concept PseudoBooleanFitness = requires(const F f, std::span<const std::uint8_t> x) {
    { f.eval(x) } -> std::convertible_to<std::int64_t>;
    { f.optimum(std::size_t{}) } -> std::convertible_to<std::int64_t>;
};

// Optional fast path: fitness after flipping bit j, without copying x.
template <typename F>
concept HasEvalFlip =
    requires(const F f, std::span<const std::uint8_t> x, std::int64_t fx, std::size_t j) {
        { f.eval_flip(x, fx, j) } -> std::convertible_to<std::int64_t>;
    };

// Number of one-bits; optimum is the all-ones string. A single-bit flip
// changes the value by exactly one, which kMaxLevelStep advertises to the
// simulator's debug checks.
struct OneMaxFitness {
    static constexpr std::int64_t kMaxLevelStep = 1;

    std::int64_t eval(std::span<const std::uint8_t> x) const noexcept {
        std::int64_t ones = 0;
        for (const auto bit : x) ones += bit;
        return ones;
    }

    std::int64_t optimum(std::size_t n) const noexcept { return static_cast<std::int64_t>(n); }

    std::int64_t eval_flip(std::span<const std::uint8_t> x, std::int64_t fx,
                           std::size_t j) const noexcept {
        return fx + (x[j] ? -1 : 1);
    }
};

// Randomized local search: flip one uniformly chosen bit per iteration,
// accept iff the fitness does not decrease, stop at the optimum. The
// returned hitting time counts initialization as step 1, so T = 1 + number
// of iterations.
template <PseudoBooleanFitness F>
RunRecord rls_run(std::int64_t n, std::uint64_t seed, const F& fitness,
                  InitPolicy init = InitPolicy::uniform(),
                  std::uint64_t iteration_cap = kDefaultIterationCap) {
    if (n < 1)
        throw std::invalid_argument("rls_run: n must be >= 1, got " + std::to_string(n));
    if (init.fixed && (init.level < 0 || init.level > n))
        throw std::invalid_argument("rls_run: init level " + std::to_string(init.level) +
                                    " outside [0, " + std::to_string(n) + "]");

    Xoshiro256StarStar rng(seed);
    std::vector<std::uint8_t> x(static_cast<std::size_t>(n));
    if (init.fixed) {
        // Uniform over strings of the given weight: fill, then Fisher-Yates.
        std::fill_n(x.begin(), static_cast<std::size_t>(init.level), std::uint8_t{1});
        for (std::size_t i = x.size() - 1; i > 0; --i)
            std::swap(x[i], x[rng.next_below(i + 1)]);
    } else {
        for (auto& bit : x) bit = static_cast<std::uint8_t>(rng.next_u64() & 1);
    }

    std::int64_t value = fitness.eval(x);
    const std::int64_t target = fitness.optimum(x.size());
    const std::int64_t start_level = value;
    std::uint64_t iterations = 0;
    while (value < target) {
        if (iterations >= iteration_cap) throw IterationCapError(iteration_cap, seed);
        const std::size_t j = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n)));
        std::int64_t flipped;
        if constexpr (HasEvalFlip<F>) {
            flipped = fitness.eval_flip(x, value, j);
        } else {
            x[j] ^= 1;
            flipped = fitness.eval(x);
            x[j] ^= 1;
        }
        if constexpr (requires { F::kMaxLevelStep; }) {
            assert(std::abs(flipped - value) <= F::kMaxLevelStep);  // no level skipping
        }
        [[maybe_unused]] const std::int64_t before = value;
        if (flipped >= value) {
            x[j] ^= 1;
            value = flipped;
        }
        assert(value >= before);  // trajectory is monotone
        ++iterations;
    }
    return {seed, n, start_level, iterations + 1};
}

// Abstract level process drawn exactly from the partition's geometrics: the
// time to leave level k+i is Geom(level_probs[i]). hitting_time is 1 + the
// total number of steps, matching rls_run's convention.
inline RunRecord level_chain_run(const LevelPartition& part, std::uint64_t seed,
                                 std::uint64_t iteration_cap = kDefaultIterationCap) {
    Xoshiro256StarStar rng(seed);
    std::uint64_t steps = 0;
    for (const double p : part.level_probs()) {
        for (;;) {
            if (steps >= iteration_cap) throw IterationCapError(iteration_cap, seed);
            ++steps;
            if (rng.next_bernoulli(p)) break;
        }
    }
    return {seed, part.end_level(), part.start_level(), steps + 1};
}

// Coupon collector over n types, `prefilled` of them already held. Draws are
// uniform; by symmetry the identity of the prefilled types is irrelevant.
inline RunRecord coupon_collector_run(std::int64_t n, std::int64_t prefilled, std::uint64_t seed,
                                      std::uint64_t iteration_cap = kDefaultIterationCap) {
    if (n < 1)
        throw std::invalid_argument("coupon_collector_run: n must be >= 1, got " +
                                    std::to_string(n));
    if (prefilled < 0 || prefilled > n)
        throw std::invalid_argument("coupon_collector_run: prefilled " +
                                    std::to_string(prefilled) + " outside [0, " +
                                    std::to_string(n) + "]");

    Xoshiro256StarStar rng(seed);
    std::vector<std::uint8_t> held(static_cast<std::size_t>(n), 0);
    std::fill_n(held.begin(), static_cast<std::size_t>(prefilled), std::uint8_t{1});
    std::int64_t distinct = prefilled;
    std::uint64_t draws = 0;
    while (distinct < n) {
        if (draws >= iteration_cap) throw IterationCapError(iteration_cap, seed);
        ++draws;
        const auto c = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (!held[c]) {
            held[c] = 1;
            ++distinct;
        }
    }
    return {seed, n, prefilled, draws + 1};
}

// Histogram of hitting times with exact summary statistics computed from the
// counts. merge() is commutative and associative, so aggregation order does
// not affect the result.
class EmpiricalDistribution {
public:
    void add(std::uint64_t value, std::uint64_t count = 1) {
        counts_[value] += count;
        total_ += count;
    }

    void merge(const EmpiricalDistribution& other) {
        for (const auto& [value, count] : other.counts_) add(value, count);
    }

    const std::map<std::uint64_t, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }

    double mean() const {
        require_nonempty();
        detail::KahanSum acc;
        for (const auto& [value, count] : counts_)
            acc.add(static_cast<double>(value) * static_cast<double>(count));
        return acc.value() / static_cast<double>(total_);
    }

    // Sample variance (n-1 denominator); 0 for a single observation.
    double variance() const {
        require_nonempty();
        if (total_ < 2) return 0.0;
        const double m = mean();
        detail::KahanSum acc;
        for (const auto& [value, count] : counts_) {
            const double d = static_cast<double>(value) - m;
            acc.add(d * d * static_cast<double>(count));
        }
        return acc.value() / static_cast<double>(total_ - 1);
    }

    std::uint64_t min_value() const {
        require_nonempty();
        return counts_.begin()->first;
    }

    std::uint64_t max_value() const {
        require_nonempty();
        return counts_.rbegin()->first;
    }

    // Smallest observed value v with P(V <= v) >= q.
    std::uint64_t quantile(double q) const {
        require_nonempty();
        if (!(q >= 0.0) || q > 1.0)
            throw std::invalid_argument("EmpiricalDistribution::quantile: q outside [0, 1]");
        const double needed = q * static_cast<double>(total_);
        std::uint64_t seen = 0;
        for (const auto& [value, count] : counts_) {
            seen += count;
            if (static_cast<double>(seen) >= needed) return value;
        }
        return counts_.rbegin()->first;
    }

    double cdf(double v) const {  // P(V <= v)
        std::uint64_t seen = 0;
        for (const auto& [value, count] : counts_) {
            if (static_cast<double>(value) > v) break;
            seen += count;
        }
        return total_ == 0 ? 0.0 : static_cast<double>(seen) / static_cast<double>(total_);
    }

    double fraction_less(double v) const {  // P(V < v)
        std::uint64_t seen = 0;
        for (const auto& [value, count] : counts_) {
            if (static_cast<double>(value) >= v) break;
            seen += count;
        }
        return total_ == 0 ? 0.0 : static_cast<double>(seen) / static_cast<double>(total_);
    }

    double fraction_greater(double v) const { return 1.0 - cdf(v); }  // P(V > v)

private:
    void require_nonempty() const {
        if (total_ == 0)
            throw std::logic_error("EmpiricalDistribution: no observations");
    }

    std::map<std::uint64_t, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Runs R independent replications of run_one, replication i seeded with
// stream_seed(master_seed, i), split across `workers` threads in contiguous
// blocks. Seeds depend only on i and the merge is keyed by value, so the
// result is identical for every worker count. If runs fail, the error for
// the smallest replication index is rethrown.
template <typename RunFn>
EmpiricalDistribution replicate(RunFn&& run_one, std::uint64_t replications,
                                std::uint64_t master_seed, int workers = 1) {
    if (replications == 0)
        throw std::invalid_argument("replicate: replications must be >= 1");
    if (workers < 1)
        throw std::invalid_argument("replicate: workers must be >= 1, got " +
                                    std::to_string(workers));
    const auto worker_count =
        static_cast<unsigned>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers),
                                                      replications));

    std::vector<EmpiricalDistribution> partial(worker_count);
    std::vector<std::exception_ptr> errors(worker_count);
    std::vector<std::int64_t> error_index(worker_count, -1);

    auto work = [&](unsigned w) {
        const std::uint64_t lo = replications * w / worker_count;
        const std::uint64_t hi = replications * (w + 1) / worker_count;
        for (std::uint64_t i = lo; i < hi; ++i) {
            try {
                partial[w].add(run_one(stream_seed(master_seed, i)).hitting_time);
            } catch (const IterationCapError& e) {
                errors[w] = std::make_exception_ptr(
                    IterationCapError(e.cap(), e.seed(), static_cast<std::int64_t>(i)));
                error_index[w] = static_cast<std::int64_t>(i);
                return;
            } catch (...) {
                errors[w] = std::current_exception();
                error_index[w] = static_cast<std::int64_t>(i);
                return;
            }
        }
    };

    if (worker_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (unsigned w = 0; w < worker_count; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }

    int first_error = -1;
    for (unsigned w = 0; w < worker_count; ++w)
        if (errors[w] && (first_error < 0 || error_index[w] < error_index[first_error]))
            first_error = static_cast<int>(w);
    if (first_error >= 0) std::rethrow_exception(errors[first_error]);

    EmpiricalDistribution result;
    for (const auto& p : partial) result.merge(p);
    return result;
}

}  // namespace geomtail
