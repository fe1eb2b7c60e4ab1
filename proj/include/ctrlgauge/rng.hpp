#pragma once

#include <cmath>
#include <cstdint>

namespace ctrlgauge {

// SplitMix64 (Steele, Lea, Flood). State advances by 0x9E3779B97F4A7C15 and
// the output is mixed with 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB, so any
// implementation reproduces the same stream from the same seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi].
    int integer(int lo, int hi)
    {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Exp(1) draw; normalised Exp(1) draws give a flat Dirichlet.
    double exponential() { return -std::log1p(-uniform()); }

    // Independent stream for sample `index`, used so that parallel and serial
    // sampling consume identical values.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index)
    {
        SplitMix64 mixer(seed ^ (index * 0xD1B54A32D192ED03ULL));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

} // namespace ctrlgauge
