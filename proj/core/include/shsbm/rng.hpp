#pragma once

#include <cmath>
#include <cstdint>

#include "shsbm/errors.hpp"

// Fixed, self-contained generators: std:: distributions are
// implementation-defined, so seeded runs would not reproduce across
// standard libraries.  Uniform, Bernoulli and point-mass draws use only
// arithmetic and comparisons and are bit-portable; Beta draws additionally
// use libm log/sqrt/pow and are bit-stable per platform.
namespace shsbm {

// splitmix64 finalizer; also the seed-mixing function used everywhere:
//   trial_seed  = mix64(mix64(base_seed) ^ (trial + 1))
//   entry_seed  = mix64(mix64(tensor_seed) ^ (entry_rank + 1))
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through splitmix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
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
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Exactly uniform over {0..bound-1} (rejection, no modulo bias).
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) fail("invalid_argument", "uniform_below requires bound > 0");
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % bound;
    }

    bool bernoulli(double mean) { return uniform01() < mean; }

    // Marsaglia polar method (no trig; one value per call, spare discarded
    // to keep draw counts deterministic).
    double normal() {
        while (true) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    // Marsaglia-Tsang for shape >= 1, boosted by u^(1/shape) below 1.
    double gamma(double shape) {
        if (shape <= 0.0) fail("invalid_argument", "gamma shape must be positive");
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x;
            double v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int s) { return (x << s) | (x >> (64 - s)); }

    std::uint64_t state_[4];
};

}  // namespace shsbm
