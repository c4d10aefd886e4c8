#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ncstune {

/// SplitMix64 finalizer; the basis for deriving independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for a child stream. Derivation is order-independent: each
/// (seed, key...) tuple maps to one stream regardless of when it is asked
/// for, so concurrent replicates can build their streams without
/// coordination.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    return mix64(seed ^ mix64(key));
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key,
                                    Keys... rest) {
    return derive_seed(derive_seed(seed, key), rest...);
}

// Key-space tags so unrelated derivations cannot collide.
inline constexpr std::uint64_t kStreamChannel = 0x4348414eULL;    // "CHAN"
inline constexpr std::uint64_t kStreamReplicate = 0x52455053ULL;  // "REPS"
inline constexpr std::uint64_t kStreamEval = 0x4556414cULL;       // "EVAL"
inline constexpr std::uint64_t kStreamOptimizer = 0x4f505449ULL;  // "OPTI"

/// One random stream. The engine (mt19937_64) and every transform below are
/// fully specified, so a given seed yields the same draws on any platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (two uniform draws, no caching).
    double normal(double mean, double sd) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        return mean + sd * r * std::cos(two_pi * u2);
    }

    double exponential(double rate) {
        double u = uniform01();
        if (u >= 1.0) u = 1.0 - 0x1.0p-53;
        return -std::log(1.0 - u) / rate;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Modulo bias is negligible for the small n used here (population
        // indices), but reject the tail anyway to keep draws exact.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ncstune
