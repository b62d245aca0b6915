#pragma once

// Counter-based random numbers (Philox4x32-10). A stream is identified by
// (seed, stream id); the n-th draw is a pure function of (seed, stream, n),
// so parallel workers that own distinct streams reproduce bit-for-bit.

#include "leggett/qcore.hpp"

#include <array>
#include <cstdint>
#include <limits>

namespace leggett {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// splitmix64 finalizer, used to derive child stream ids.
std::uint64_t mix64(std::uint64_t x);

class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

    /// Independent child stream; deterministic in (this stream, child).
    [[nodiscard]] RngStream split(std::uint64_t child) const {
        return RngStream(seed_, mix64(stream_ ^ mix64(child + 0x9E3779B97F4A7C15ULL)));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

/// Uniform direction: z = 2u - 1, azimuth = 2 pi v.
UnitVector3 uniform_on_sphere(RngStream& rng);

}  // namespace leggett
