#pragma once

#include <cstdint>

namespace cycle4 {

/**
 * Counter-based stream: draw k of trial i under seed s is
 * splitmix64_mix(key(s, i) + (k + 1) * golden). Every trial owns an
 * independent stream, so results do not depend on how trials are split
 * across workers.
 */
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) : key_(mix(seed ^ mix(trial + kGolden))) {}

    std::uint64_t next() {
        ++counter_;
        return mix(key_ + counter_ * kGolden);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace cycle4
