#include "vectorix/rng.hpp"

#include <cmath>

namespace vectorix {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t rng_word(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    const std::uint64_t key = mix64(seed + kRngGolden * (stream + 1));
    return mix64(key + kRngGolden * ctr);
}

double rng_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    return static_cast<double>(rng_word(seed, stream, ctr) >> 11) * 0x1.0p-53;
}

double rng_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr) {
    const double u1 = rng_u01(seed, stream, 2 * ctr);
    const double u2 = rng_u01(seed, stream, 2 * ctr + 1);
    // 1 - u1 lies in (0, 1], so the log is finite.
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * M_PI * u2);
}

std::uint32_t rng_below(std::uint64_t seed, std::uint64_t stream, std::uint64_t ctr,
                        std::uint32_t bound) {
    const std::uint64_t w = rng_word(seed, stream, ctr);
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(w) * bound) >> 64);
}

} // namespace vectorix
