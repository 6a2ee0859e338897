#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cabsim {

// Derives an independent substream seed from (seed, stream) using the
// splitmix64 finalizer over seed + (stream+1)*golden-gamma.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic generator: std::mt19937_64 engine (bit-exact per the
// standard) with sampling routines implemented here. The std::*
// distribution adaptors are implementation-defined, which would break the
// cross-platform bit-identical-trace contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for (seed, stream); used for per-round substreams.
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform integer in [0, n); n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Box-Muller; always consumes exactly two uniforms, no cached spare.
    double normal(double mean, double stddev) {
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        return mean + stddev * mag * std::cos(two_pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cabsim
