#include <doctest.h>

#include <cmath>

#include "vectorix/rng.hpp"

using namespace vectorix;

TEST_CASE("rng words are deterministic and stream-separated") {
    CHECK(rng_word(1, 2, 3) == rng_word(1, 2, 3));
    CHECK(rng_word(1, 2, 3) != rng_word(1, 2, 4));
    CHECK(rng_word(1, 2, 3) != rng_word(1, 3, 3));
    CHECK(rng_word(1, 2, 3) != rng_word(2, 2, 3));
}

TEST_CASE("u01 stays in [0,1)") {
    for (std::uint64_t c = 0; c < 10000; ++c) {
        const double u = rng_u01(7, 1, c);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gaussian stream has roughly standard moments") {
    const long n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (long c = 0; c < n; ++c) {
        const double g = rng_gaussian(11, 5, static_cast<std::uint64_t>(c));
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("bounded draws respect the bound") {
    for (std::uint64_t c = 0; c < 1000; ++c) {
        CHECK(rng_below(3, 4, c, 7) < 7);
        CHECK(rng_below(3, 4, c, 1) == 0);
    }
}
