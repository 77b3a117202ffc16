// rng.hpp — deterministic, platform-independent random numbers.
//
// xoshiro256** state transitions with splitmix64 seeding. Substreams are
// derived from (seed, stream) so independent channels/processes can draw
// without coordination and still reproduce bit-exactly everywhere.
#pragma once

#include <cmath>
#include <cstdint>

#include "emitterlab/units.hpp"

namespace eml {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

class Rng {
  public:
    // Substream `stream` of master seed `seed`.
    Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
        for (auto& word : s_) word = mix.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential with the given mean (mean > 0).
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Normal via Box-Muller, two uniforms per draw (no caching, so the draw
    // sequence is a pure function of the call sequence).
    double gaussian(double mean, double sigma) {
        const double u1 = uniform();
        const double u2 = uniform();
        return mean + sigma * std::sqrt(-2.0 * std::log1p(-u1)) *
                          std::cos(2.0 * kPi * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace eml
