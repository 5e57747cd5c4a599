#pragma once
#include <cstdint>
#include <random>

namespace tglasso {

/**
 * Seeded random source with fully specified output.
 *
 * The bit stream is std::mt19937_64, whose sequence the C++ standard fixes.
 * The distributions are written out here instead of using <random>'s
 * distribution classes, whose algorithms vary between standard libraries:
 *
 *  - below(n): rejection sampling on the raw 64-bit draw; values at or above
 *    the largest multiple of n are redrawn, the result is draw % n.
 *  - uniform(): top 53 bits of one draw scaled by 2^-53, in [0, 1).
 *  - normal(): Box-Muller on two draws, u1 = (top53 + 1)·2^-53 in (0, 1],
 *    u2 = top53·2^-53; returns sqrt(-2 ln u1)·cos(2π u2) and caches
 *    sqrt(-2 ln u1)·sin(2π u2) for the next call.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n);
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for independent stream `stream` derived from `seed`:
/// splitmix64(seed + 0x9E3779B97F4A7C15·(stream + 1)).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace tglasso
