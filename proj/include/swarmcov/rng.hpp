#pragma once

// xoshiro256** with SplitMix64 seeding. Each stream is keyed by (seed, index)
// so parallel work can be split into fixed chunks with reproducible draws.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace swarmcov {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256ss {
public:
    using result_type = std::uint64_t;
    static constexpr std::string_view name = "xoshiro256** (SplitMix64-seeded, 4096-trial chunk streams)";

    explicit Xoshiro256ss(std::uint64_t seed) { reseed(seed, 0); }
    Xoshiro256ss(std::uint64_t seed, std::uint64_t stream) { reseed(seed, stream); }

    void reseed(std::uint64_t seed, std::uint64_t stream)
    {
        SplitMix64 mix(seed);
        // Fold the stream index into a second SplitMix64 pass so that
        // neighbouring streams do not share state words.
        SplitMix64 keyed(mix.next() ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
        for (auto& w : s_) {
            w = keyed.next();
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
            s_[0] = 1;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
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

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Standard exponential variate.
    double exponential() { return -std::log1p(-uniform01()); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace swarmcov
