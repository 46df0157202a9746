#ifndef PROPNET_RNG_HPP
#define PROPNET_RNG_HPP

#include <cmath>
#include <cstdint>

namespace propnet {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// Folds one word into a running key. Used to derive independent substream
// keys from (seed, tag, index, ...) tuples.
constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64((h + v) * 0x2545F4914F6CDD1DULL + kGolden64);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) noexcept {
    return absorb(absorb(absorb(absorb(0x8000000000000001ULL, seed), a), b), c);
}

// Counter-based stream: output_i = mix64(key + (i+1)*golden), i.e. the
// SplitMix64 sequence started at `key`. Streams with distinct keys are
// statistically independent, and a stream's output depends only on (key,
// draw index), which is what makes scheduling-order-independent parallel
// sampling reproducible.
class Substream {
public:
    Substream() : state_(0) {}
    explicit Substream(std::uint64_t key) : state_(key) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGolden64;
        return mix64(state_);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1, and 1-u is
    // also strictly inside (0,1) in double precision.
    double next_unit() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Exponential waiting time with the given rate (> 0).
    double next_exp(double rate) noexcept {
        return -std::log(next_unit()) / rate;
    }

    // Uniform integer in [0, bound), bound > 0. Multiply-shift; the
    // O(bound/2^64) bias is irrelevant at our scales.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

} // namespace propnet

#endif
