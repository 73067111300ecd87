#pragma once

#include <bit>
#include <cstdint>

namespace geomtail {

// SplitMix64 increment (Steele, Lea & Flood, OOPSLA 2014). Also used to
// derive per-replication stream seeds.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Advances `state` by kGoldenGamma and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += kGoldenGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for replication `index` of a master seed. Equals
// mix(master + (index+1)*gamma); injective in index for fixed master, so
// streams never reuse a seed regardless of how work is split across workers.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    std::uint64_t state = master_seed + index * kGoldenGamma;
    return splitmix64(state);
}

// xoshiro256** 1.0 (Blackman & Vigna). Fixed algorithm and constants: the
// same seed produces the same sequence on every platform and compiler.
class Xoshiro256StarStar {
public:
    explicit constexpr Xoshiro256StarStar(std::uint64_t seed) noexcept {
        for (auto& word : state_) word = splitmix64(seed);
    }

    constexpr std::uint64_t next_u64() noexcept {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 random bits, exactly representable.
    constexpr double next_unit() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound) by bitmask rejection; unbiased for every bound >= 1.
    constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t mask =
            bound <= 1 ? 0 : ~std::uint64_t{0} >> std::countl_zero(bound - 1);
        for (;;) {
            const std::uint64_t draw = next_u64() & mask;
            if (draw < bound) return draw;
        }
    }

    constexpr bool next_bernoulli(double p) noexcept { return next_unit() < p; }

private:
    std::uint64_t state_[4];
};

}  // namespace geomtail
