#pragma once

#include <cstdint>
#include <random>

namespace stein {

/// Seedable random stream. Stream (seed, index) is a pure function of its two keys, so
/// batch b of a run draws the same numbers whichever worker executes it.
///
/// Only the engine comes from <random>; the variate conversions below are written out
/// because the standard distributions are implementation-defined.
class Rng {
public:
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer on [0, n), n >= 1, by rejection (unbiased).
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }
    /// Exponential with the given rate.
    double exponential(double rate);
    /// Number of failures before the first success, success probability p in (0, 1].
    std::uint64_t geometric(double p);
    /// Binomial(n, p) by summing geometric gaps; cost O(1 + np).
    std::uint64_t binomial(std::uint64_t n, double p);

private:
    explicit Rng(std::seed_seq& seq) : engine_(seq) {}
    std::mt19937_64 engine_;
};

}  // namespace stein
