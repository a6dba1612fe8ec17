#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "vectorix/channel.hpp"
#include "vectorix/qr.hpp"

using namespace vectorix;

namespace {

double unitarity_defect(const CMatrix& q) {
    return max_abs(q.adjoint() * q - CMatrix::Identity(q.rows(), q.cols()));
}

double reconstruction_error(const QrFactorization& f, const CMatrix& a) {
    return (f.reconstruct() - a).norm() / a.norm();
}

double min_r2(const QrFactorization& f) {
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < f.R.rows(); ++k) m = std::min(m, std::norm(f.R(k, k)));
    return m;
}

void check_common_invariants(const QrFactorization& f, const CMatrix& a) {
    CHECK(unitarity_defect(f.Q) <= 1e-10);
    CHECK(reconstruction_error(f, a) < 1e-9);
    for (int k = 0; k < f.R.rows(); ++k) {
        CHECK(f.R(k, k).imag() == 0.0);
        CHECK(f.R(k, k).real() >= 0.0);
        for (int i = k + 1; i < f.R.rows(); ++i) CHECK(f.R(i, k) == Complex(0.0, 0.0));
    }
    // |prod r_kk| = |det A|
    double logprod = 0.0;
    for (int k = 0; k < f.R.rows(); ++k) logprod += std::log(f.R(k, k).real());
    const double logdet = std::log(std::abs(a.determinant()));
    CHECK(logprod == doctest::Approx(logdet).epsilon(1e-8));
}

CMatrix orthogonal_columns_with_norms() {
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    return a;
}

} // namespace

TEST_CASE("gram_schmidt_qr of identity is identity") {
    const CMatrix a = CMatrix::Identity(3, 3);
    const QrFactorization f = gram_schmidt_qr(a);
    CHECK(max_abs(f.Q - a) == 0.0);
    CHECK(max_abs(f.R - a) == 0.0);
    CHECK(f.perm.is_identity());
}

TEST_CASE("gram_schmidt_qr of an antidiagonal flip") {
    CMatrix a(2, 2);
    a << 0.0, 1.0, 1.0, 0.0;
    const QrFactorization f = gram_schmidt_qr(a);
    CHECK(f.R(0, 0).real() == doctest::Approx(1.0));
    CHECK(f.R(1, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(f.R(0, 1)) == doctest::Approx(0.0));
    CHECK(unitarity_defect(f.Q) <= 1e-12);
}

TEST_CASE("gram_schmidt_qr matches the Householder reference") {
    const CMatrix a = random_channel(4, 2024);
    const QrFactorization f = gram_schmidt_qr(a);
    check_common_invariants(f, a);

    CMatrix q_ref, r_ref;
    testing::householder_qr(a, q_ref, r_ref);
    CHECK((q_ref * r_ref - a).norm() / a.norm() < 1e-12);
    for (int k = 0; k < 4; ++k)
        CHECK(f.R(k, k).real() == doctest::Approx(std::abs(r_ref(k, k))).epsilon(1e-9));
}

TEST_CASE("sorted_qr picks weakest column first") {
    const QrFactorization f = sorted_qr(orthogonal_columns_with_norms());
    CHECK(f.perm.order() == std::vector<int>{1, 2, 0});
    check_common_invariants(f, orthogonal_columns_with_norms());
}

TEST_CASE("sorted_qr tie-break on identity gives identity order") {
    const QrFactorization f = sorted_qr(CMatrix::Identity(4, 4));
    CHECK(f.perm.is_identity());
}

TEST_CASE("sorted_qr step invariant and oracle bounds") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const CMatrix a = random_channel(4, seed);
        const QrFactorization fs = sorted_qr(a);
        check_common_invariants(fs, a);

        // Selected residual is minimal at every step: recompute residuals of
        // the not-yet-chosen columns against the already-built Q prefix.
        for (int k = 0; k < 4; ++k) {
            const double chosen = fs.R(k, k).real();
            for (int j = k + 1; j < 4; ++j) {
                CVector u = a.col(fs.perm[j]);
                for (int m = 0; m < k; ++m) u -= fs.Q.col(m).dot(u) * fs.Q.col(m);
                CHECK(chosen <= u.norm() * (1.0 + 1e-9));
            }
        }

        // The brute-force order dominates the greedy one on every input.
        const Permutation opt = exhaustive_maxmin_order(a);
        const double exhaustive = min_r2(forced_order_qr(a, opt));
        CHECK(min_r2(fs) <= exhaustive * (1.0 + 1e-12));
    }

    // Against the natural order the greedy rule is only a heuristic (it can
    // lose, e.g. seed 2); these seeds are the frozen regression set.
    for (std::uint64_t seed : {1u, 3u, 5u, 9u, 10u}) {
        const CMatrix a = random_channel(4, seed);
        CHECK(min_r2(sorted_qr(a)) >= min_r2(gram_schmidt_qr(a)) * (1.0 - 1e-12));
    }
}

TEST_CASE("pivoted_qr picks strongest column first") {
    const QrFactorization f = pivoted_qr(orthogonal_columns_with_norms());
    CHECK(f.perm.order() == std::vector<int>{0, 2, 1});
    CHECK(pivoted_qr(CMatrix::Identity(3, 3)).perm.is_identity());
}

TEST_CASE("pivoted_qr starts at the max column norm") {
    for (std::uint64_t seed : {10u, 11u, 12u}) {
        const CMatrix a = random_channel(4, seed);
        const QrFactorization f = pivoted_qr(a);
        double max_norm2 = 0.0;
        for (int j = 0; j < 4; ++j) max_norm2 = std::max(max_norm2, a.col(j).squaredNorm());
        CHECK(std::norm(f.R(0, 0)) == doctest::Approx(max_norm2).epsilon(1e-12));
        check_common_invariants(f, a);
    }
}

TEST_CASE("forced_order_qr reproduces the unforced variants bitwise") {
    const CMatrix a = random_channel(4, 77);

    const QrFactorization fg = gram_schmidt_qr(a);
    const QrFactorization ff = forced_order_qr(a, Permutation::identity(4));
    CHECK(max_abs(fg.Q - ff.Q) == 0.0);
    CHECK(max_abs(fg.R - ff.R) == 0.0);

    const QrFactorization fs = sorted_qr(a);
    const QrFactorization ffs = forced_order_qr(a, fs.perm);
    CHECK(max_abs(fs.Q - ffs.Q) == 0.0);
    CHECK(max_abs(fs.R - ffs.R) == 0.0);
}

TEST_CASE("forced_order_qr keeps the determinant identity for any order") {
    const CMatrix a = random_channel(4, 99);
    std::vector<int> order{2, 0, 3, 1};
    const QrFactorization f = forced_order_qr(a, Permutation(order));
    check_common_invariants(f, a);
}

TEST_CASE("exhaustive_maxmin_order basics") {
    CHECK(exhaustive_maxmin_order(CMatrix::Identity(1, 1)).is_identity());
    CHECK(exhaustive_maxmin_order(orthogonal_columns_with_norms()).size() == 3);
    // Orthogonal columns: every order yields the same r set, so the
    // lexicographically smallest wins.
    CHECK(exhaustive_maxmin_order(CMatrix::Identity(3, 3)).is_identity());

    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const CMatrix a = random_channel(3, seed);
        const Permutation opt = exhaustive_maxmin_order(a);
        CHECK(min_r2(forced_order_qr(a, opt)) >= min_r2(sorted_qr(a)) * (1.0 - 1e-12));
    }
}

TEST_CASE("exhaustive_maxmin_order rejects large inputs") {
    CHECK_THROWS_AS(exhaustive_maxmin_order(CMatrix::Identity(9, 9)), DimensionError);
}

TEST_CASE("singular input raises") {
    CMatrix a(3, 3);
    a.setZero();
    a.col(0).setOnes();
    a.col(1).setOnes();
    a(2, 2) = 1.0;
    CHECK_THROWS_AS(gram_schmidt_qr(a), SingularMatrixError);
    CHECK_THROWS_AS(sorted_qr(a), SingularMatrixError);
}

TEST_CASE("non-finite input raises") {
    CMatrix a = CMatrix::Identity(2, 2);
    a(0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(gram_schmidt_qr(a), DimensionError);
}

TEST_CASE("permutation validation") {
    CHECK_THROWS_AS(Permutation({0, 0, 1}), DimensionError);
    CHECK_THROWS_AS(Permutation({0, 3, 1}), DimensionError);
    const Permutation p({2, 0, 1});
    CHECK(p.inverse().order() == std::vector<int>{1, 2, 0});
    const Permutation q = p.inverse().inverse();
    CHECK(q == p);
}
