#pragma once

#include <cstdint>

// Counter-based deterministic random source. Every draw is a pure function
// of (seed, stream, counter), so results do not depend on evaluation order
// and are reproducible from any language that implements the same mixer:
//
//   mix64(x): x ^= x >> 30; x *= 0xbf58476d1ce4e5b9;
//             x ^= x >> 27; x *= 0x94d049bb133111eb; x ^= x >> 31;
//   word(seed, stream, ctr) = mix64(mix64(seed + GOLDEN*(stream+1)) + GOLDEN*ctr)
//
// with GOLDEN = 0x9e3779b97f4a7c15 (the splitmix64 increment).

namespace vectorix {

inline constexpr std::uint64_t kRngGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t x);

/// One 64-bit word from stream `stream` at position `ctr`.
std::uint64_t rng_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr);

/// Uniform double in [0, 1) with 53 random bits.
double rng_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr);

/// Standard normal via Box-Muller over counters (2*ctr, 2*ctr + 1).
double rng_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr);

/// Uniform integer in [0, bound) by 64-bit multiply-shift; bound >= 1.
std::uint32_t rng_below(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr,
                        std::uint32_t bound);

} // namespace vectorix
