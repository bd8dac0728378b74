#pragma once

#include <cstdint>
#include <random>

namespace netbid {

// All randomness flows through mt19937_64 plus the two draw helpers below.
// The standard <random> distributions are implementation-defined, so using
// them would make "same seed, same output" hold only per stdlib. Rejection
// sampling keeps the stream identical everywhere.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Unbiased integer in [0, n). n must be >= 1.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - Rng::max() % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

// Unbiased integer in [lo, hi], inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(uniform_index(rng, span));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace netbid
