#pragma once

#include <cstdint>
#include <random>

namespace ordmix {

/// Seeded random stream passed explicitly to every sampler.
///
/// Streams are cheap values; `split()` derives an independent child stream
/// so parallel work never shares an engine.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform draw on the open interval (0, 1): (k + 1/2) / 2^52 with 52 random
    /// bits k. Every value and its complement 1 - u are exact doubles.
    double uniform() noexcept
    {
        return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// True with probability p; p = 0 and p = 1 are exact.
    bool bernoulli(double p) noexcept { return uniform() < p; }

    Stream split() { return Stream(mix(engine_() ^ 0x9e3779b97f4a7c15ULL)); }

private:
    // splitmix64 finalizer: decorrelates nearby integer seeds.
    static std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace ordmix
