#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "geomtail/exact_oracle.hpp"
#include "geomtail/tail_bounds.hpp"
#include "test_support.hpp"

using namespace geomtail;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent reference: negative binomial pmf for n identical summands,
// P(X = t) = C(t-1, n-1) p^n (1-p)^(t-n), evaluated in log space.
double negative_binomial_pmf(std::int64_t n, double p, std::int64_t t) {
    const double log_choose = std::lgamma(static_cast<double>(t)) -
                              std::lgamma(static_cast<double>(n)) -
                              std::lgamma(static_cast<double>(t - n + 1));
    return std::exp(log_choose + static_cast<double>(n) * std::log(p) +
                    static_cast<double>(t - n) * std::log1p(-p));
}

// Independent reference for heterogeneous specs: direct pairwise convolution
// of truncated geometric pmfs, O(n * t_max^2).
std::vector<double> brute_force_pmf(const std::vector<double>& probs, std::int64_t t_max) {
    std::vector<double> acc(static_cast<std::size_t>(t_max) + 1, 0.0);
    acc[0] = 1.0;
    for (const double p : probs) {
        std::vector<double> geom(acc.size(), 0.0);
        for (std::size_t j = 1; j < geom.size(); ++j)
            geom[j] = p * std::pow(1.0 - p, static_cast<double>(j - 1));
        std::vector<double> next(acc.size(), 0.0);
        for (std::size_t a = 0; a < acc.size(); ++a)
            for (std::size_t b = 1; b < geom.size() && a + b < next.size(); ++b)
                next[a + b] += acc[a] * geom[b];
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

TEST_CASE("single geometric pmf is exact") {
    const ExactPmf pmf = exact_pmf(GeometricSumSpec({0.5}), 3);
    REQUIRE(pmf.support_start == 1);
    REQUIRE(pmf.masses == std::vector<double>{0.5, 0.25, 0.125});
    REQUIRE(pmf.residual == 0.125);
    REQUIRE(pmf.residual_warning);  // 12.5% truncated is worth flagging
}

TEST_CASE("two fair summands match hand calculation") {
    const ExactPmf pmf = exact_pmf(GeometricSumSpec({0.5, 0.5}), 4);
    REQUIRE(pmf.support_start == 2);
    REQUIRE(pmf.masses == std::vector<double>{0.25, 0.25, 0.1875});
    REQUIRE(pmf.residual == 0.3125);
    REQUIRE(pmf.mass_at(4) == 0.1875);
    REQUIRE(pmf.mass_at(1) == 0.0);
    REQUIRE(pmf.mass_at(5) == 0.0);
    REQUIRE(pmf.cdf(3) == 0.5);
    REQUIRE(pmf.cdf(1) == 0.0);
    REQUIRE(pmf.cdf(100) == 0.6875);
}

TEST_CASE("deterministic summands give a point mass") {
    const ExactPmf pmf = exact_pmf(GeometricSumSpec({1.0, 1.0}), 5);
    REQUIRE(pmf.support_start == 2);
    REQUIRE(pmf.masses == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    REQUIRE(pmf.residual == 0.0);
}

TEST_CASE("identical summands match the negative binomial closed form") {
    for (const std::int64_t n : {1LL, 2LL, 3LL, 5LL}) {
        for (const double p : {0.3, 0.5, 0.9}) {
            const GeometricSumSpec spec(std::vector<double>(static_cast<std::size_t>(n), p));
            const ExactPmf pmf = exact_pmf(spec, 60);
            for (std::int64_t t = n; t <= 60; ++t)
                REQUIRE_THAT(pmf.mass_at(t),
                             WithinRel(negative_binomial_pmf(n, p, t), 1e-10) ||
                                 WithinAbs(0.0, 1e-300));
        }
    }
}

TEST_CASE("heterogeneous spec matches a brute-force convolution") {
    const std::vector<double> probs{0.3, 0.6, 0.9};
    const ExactPmf pmf = exact_pmf(GeometricSumSpec(probs), 40);
    const std::vector<double> reference = brute_force_pmf(probs, 40);
    for (std::int64_t t = 3; t <= 40; ++t)
        REQUIRE_THAT(pmf.mass_at(t), WithinAbs(reference[static_cast<std::size_t>(t)], 1e-13));
}

TEST_CASE("pmf is invariant under summand reordering") {
    Xoshiro256StarStar rng(314159);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> probs = random_probs(rng, 2, 8, 0.15, 1.0);
        const ExactPmf forward = exact_pmf(GeometricSumSpec(probs), 80);
        std::reverse(probs.begin(), probs.end());
        const ExactPmf reversed = exact_pmf(GeometricSumSpec(probs), 80);
        REQUIRE(forward.masses.size() == reversed.masses.size());
        for (std::size_t i = 0; i < forward.masses.size(); ++i)
            REQUIRE_THAT(forward.masses[i], WithinAbs(reversed.masses[i], 1e-13));
    }
}

TEST_CASE("masses sum to one with the residual") {
    Xoshiro256StarStar rng(65537);
    for (int trial = 0; trial < 20; ++trial) {
        const GeometricSumSpec spec = random_spec(rng, 1, 6, 0.2, 1.0);
        const ExactPmf pmf = exact_pmf(spec, 90);
        double total = pmf.residual;
        for (const double m : pmf.masses) {
            REQUIRE(m >= 0.0);
            total += m;
        }
        REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("residual shrinks as the truncation point grows") {
    const GeometricSumSpec spec({0.3, 0.5});
    double prev = 1.0;
    for (const std::int64_t t_max : {2LL, 5LL, 10LL, 30LL, 90LL}) {
        const double r = exact_pmf(spec, t_max).residual;
        REQUIRE(r <= prev + 1e-15);
        prev = r;
    }
    REQUIRE(prev < 1e-10);
}

TEST_CASE("residual warning flags heavy truncation") {
    REQUIRE(exact_pmf(GeometricSumSpec({0.01}), 1).residual_warning);
    REQUIRE_FALSE(exact_pmf(GeometricSumSpec({0.5, 0.5}), 40).residual_warning);
}

TEST_CASE("truncated mean approaches the exact mean") {
    const GeometricSumSpec spec({0.3, 0.7, 0.5});
    const std::int64_t t_max = 200;
    const ExactPmf pmf = exact_pmf(spec, t_max);
    detail::KahanSum acc;
    for (std::size_t i = 0; i < pmf.masses.size(); ++i)
        acc.add(static_cast<double>(pmf.support_start + static_cast<std::int64_t>(i)) *
                pmf.masses[i]);
    const double partial = acc.value();
    REQUIRE(partial <= spec.mean() + 1e-12);
    // E[X 1{X > t}] <= residual * (t + E[X]): restarting every level after
    // step t overestimates the remaining time.
    REQUIRE(spec.mean() - partial <=
            pmf.residual * (static_cast<double>(t_max) + spec.mean()) + 1e-12);
}

TEST_CASE("upper tail at frozen points") {
    const GeometricSumSpec spec({0.5, 0.5});
    REQUIRE(exact_upper_tail(spec, 1.0) == 1.0);   // below the support
    REQUIRE(exact_upper_tail(spec, 3.0) == 0.5);   // 1 - P(2) - P(3)
    REQUIRE(exact_upper_tail(spec, 3.5) == 0.5);   // same integer cut
    REQUIRE(exact_upper_tail(GeometricSumSpec({1.0}), 1.0) == 0.0);
    REQUIRE(exact_upper_tail(GeometricSumSpec({1.0}), 0.5) == 1.0);
}

TEST_CASE("lower tail at frozen points") {
    const GeometricSumSpec spec({0.5, 0.5});
    REQUIRE(exact_lower_tail(spec, 2.0) == 0.0);     // P(X < 2) over support {2,...}
    REQUIRE(exact_lower_tail(spec, 4.0) == 0.5);     // P(2) + P(3)
    REQUIRE(exact_lower_tail(spec, 4.5) == 0.6875);  // includes P(4)
    REQUIRE(exact_lower_tail(GeometricSumSpec({1.0}), 2.0) == 1.0);
}

TEST_CASE("tails are consistent with the pmf cdf") {
    Xoshiro256StarStar rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const GeometricSumSpec spec = random_spec(rng, 1, 5, 0.25, 1.0);
        const ExactPmf pmf = exact_pmf(spec, 120);
        for (const double thr : {3.0, 5.5, 9.0, 20.0}) {
            REQUIRE_THAT(exact_upper_tail(spec, thr),
                         WithinAbs(1.0 - pmf.cdf(static_cast<std::int64_t>(std::floor(thr))),
                                   1e-12));
            REQUIRE_THAT(exact_lower_tail(spec, thr),
                         WithinAbs(pmf.cdf(static_cast<std::int64_t>(std::ceil(thr)) - 1),
                                   1e-12));
        }
    }
}

TEST_CASE("exact tails respect the closed-form bounds") {
    Xoshiro256StarStar rng(1234);
    for (int trial = 0; trial < 25; ++trial) {
        const GeometricSumSpec spec = random_spec(rng, 1, 6, 0.2, 1.0);
        for (const double delta : {1.0, 3.0, 7.0}) {
            REQUIRE(exact_lower_tail(spec, spec.mean() - delta) <=
                    lower_tail_bound(spec, delta).bound * (1.0 + 1e-12));
            REQUIRE(exact_upper_tail(spec, spec.mean() + delta) <=
                    upper_tail_bound(spec, delta).bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("infeasible requests are refused") {
    REQUIRE_THROWS_AS(exact_pmf(GeometricSumSpec({0.5, 0.5}), 1), std::invalid_argument);
    REQUIRE_THROWS_AS(exact_pmf(GeometricSumSpec({0.5, 0.5}), 60'000'000),
                      OracleInfeasibleError);
    REQUIRE_THROWS_AS(exact_upper_tail(GeometricSumSpec({0.5, 0.5}), 6e7),
                      OracleInfeasibleError);
}
