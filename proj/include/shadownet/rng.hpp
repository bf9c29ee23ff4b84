#pragma once

// Deterministic random number stack. Every stochastic component of the
// library draws from these generators and nothing else, so a run is fully
// determined by its base seed on any platform:
//
//   * splitmix64 for seed mixing and sub-stream derivation,
//   * xoshiro256++ as the bulk generator,
//   * Box-Muller for standard normals (pairwise, spare cached).

#include <cstdint>
#include <cmath>

namespace shadownet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for sub-stream `index` of `base`. Distinct indices give statistically
// independent streams; (base, index) always maps to the same seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 lies in (0, 1] so the logarithm stays finite.
        const double u1 = (static_cast<double>(rng_.next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = rng_.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = kTwoPi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double uniform() { return rng_.uniform(); }
    std::uint64_t next_u64() { return rng_.next(); }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace shadownet
