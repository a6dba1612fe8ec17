#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vectorix/channel.hpp"
#include "vectorix/lll.hpp"

using namespace vectorix;

namespace {

bool is_gauss_integer(const CMatrix& t) {
    for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j)
            if (t(i, j).real() != std::round(t(i, j).real()) ||
                t(i, j).imag() != std::round(t(i, j).imag()))
                return false;
    return true;
}

void check_reduced(const CMatrix& a, const LllResult& lr, double delta) {
    CHECK(is_gauss_integer(lr.transform));
    CHECK(testing::gauss_int_abs_det_sq(lr.transform) == 1ULL);
    CHECK((a * lr.transform - lr.reduced).norm() <= 1e-9 * a.norm());

    const testing::GsData gs = testing::gram_schmidt_data(lr.reduced);
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            CHECK(std::abs(gs.mu(i, j).real()) <= 0.5 + 1e-9);
            CHECK(std::abs(gs.mu(i, j).imag()) <= 0.5 + 1e-9);
        }
    for (int k = 1; k < n; ++k) {
        const double lhs = gs.norm2[static_cast<std::size_t>(k)] +
                           std::norm(gs.mu(k, k - 1)) * gs.norm2[static_cast<std::size_t>(k - 1)];
        CHECK(lhs >= delta * gs.norm2[static_cast<std::size_t>(k - 1)] * (1.0 - 1e-9));
    }
}

} // namespace

TEST_CASE("already reduced basis is untouched") {
    const CMatrix a = CMatrix::Identity(4, 4);
    const LllResult lr = lll_reduce(a, 0.75);
    CHECK(max_abs(lr.transform - a) == 0.0);
    CHECK(max_abs(lr.reduced - a) == 0.0);
}

TEST_CASE("ill conditioned basis improves") {
    CMatrix a(2, 2);
    a << 1.0, 0.99, 0.0, 0.01;
    const LllResult lr = lll_reduce(a, 0.75);
    check_reduced(a, lr, 0.75);
    CHECK(testing::condition_number(lr.reduced) < testing::condition_number(a));
}

TEST_CASE("reduction contracts hold across seeds and deltas") {
    for (double delta : {0.75, 1.0}) {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const CMatrix a = random_channel(4, 1000 + seed);
            check_reduced(a, lll_reduce(a, delta), delta);
        }
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const CMatrix a = random_channel(8, 2000 + seed);
            check_reduced(a, lll_reduce(a, delta), delta);
        }
    }
}

TEST_CASE("reduction does not hurt the weakest sorted-QR pivot on the bundled seed") {
    const CMatrix a = random_channel(4, 42);
    const LllResult lr = lll_reduce(a, 0.75);
    double before = 1e300, after = 1e300;
    const QrFactorization fa = sorted_qr(a);
    const QrFactorization fr = sorted_qr(lr.reduced);
    for (int k = 0; k < 4; ++k) {
        before = std::min(before, std::norm(fa.R(k, k)));
        after = std::min(after, std::norm(fr.R(k, k)));
    }
    CHECK(after >= before * (1.0 - 1e-12));
}

TEST_CASE("delta is validated") {
    CHECK_THROWS_AS(lll_reduce(CMatrix::Identity(2, 2), 0.5), DimensionError);
    CHECK_THROWS_AS(lll_reduce(CMatrix::Identity(2, 2), 1.01), DimensionError);
}

TEST_CASE("lr_qr carries the transform and reconstructs the reduced basis") {
    const CMatrix a = random_channel(4, 321);
    const QrFactorization f = lr_qr(a, 0.75, true);
    REQUIRE(f.lr_transform.has_value());
    const CMatrix reduced = a * (*f.lr_transform);
    CHECK((f.reconstruct() - reduced).norm() / reduced.norm() < 1e-9);
}
