#include "vectorix/lll.hpp"

#include <cmath>

namespace vectorix {
namespace {

Complex round_gauss(const Complex& z) {
    return Complex(std::round(z.real()), std::round(z.imag()));
}

// Gram-Schmidt state of the working basis: squared norms of the orthogonal
// vectors and the mu coefficients. Recomputed from scratch; the bases here
// are small (channel-sized), so clarity beats incremental updates.
struct GsState {
    CMatrix ortho;       // unnormalized orthogonal vectors, columns
    CMatrix mu;          // mu(i, j) = <b_i, o_j> / |o_j|^2, j < i
    Eigen::VectorXd norm2;
};

GsState gram_schmidt(const CMatrix& b) {
    const int n = static_cast<int>(b.cols());
    GsState s;
    s.ortho = b;
    s.mu = CMatrix::Identity(n, n);
    s.norm2.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            const Complex m = s.ortho.col(j).dot(b.col(i)) / s.norm2[j];
            s.mu(i, j) = m;
            s.ortho.col(i) -= m * s.ortho.col(j);
        }
        s.norm2[i] = s.ortho.col(i).squaredNorm();
    }
    return s;
}

} // namespace

LllResult lll_reduce(const CMatrix& a, double delta) {
    require_square(a, "lll input");
    require_finite(a, "lll input");
    if (!(delta > 0.5 && delta <= 1.0))
        throw DimensionError("lll delta must lie in (0.5, 1]");

    const int n = static_cast<int>(a.rows());
    const double tiny = kSingularRelThreshold * a.norm();

    CMatrix basis = a;
    CMatrix t = CMatrix::Identity(n, n);
    const long swap_cap = 64L * n * n;
    long swaps = 0;

    GsState gs = gram_schmidt(basis);
    for (int i = 0; i < n; ++i)
        if (std::sqrt(gs.norm2[i]) < tiny)
            throw SingularMatrixError("lll input is numerically singular");

    int k = 1;
    while (k < n) {
        // Size-reduce column k against k-1 .. 0.
        for (int j = k - 1; j >= 0; --j) {
            const Complex c = round_gauss(gs.mu(k, j));
            if (c != Complex(0.0, 0.0)) {
                basis.col(k) -= c * basis.col(j);
                t.col(k) -= c * t.col(j);
                for (int l = 0; l <= j; ++l) gs.mu(k, l) -= c * gs.mu(j, l);
            }
        }
        const double lhs = gs.norm2[k];
        const double rhs = (delta - std::norm(gs.mu(k, k - 1))) * gs.norm2[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            basis.col(k).swap(basis.col(k - 1));
            t.col(k).swap(t.col(k - 1));
            if (++swaps > swap_cap)
                throw ConvergenceError("lll did not converge within " +
                                       std::to_string(swap_cap) + " swaps");
            gs = gram_schmidt(basis);
            k = std::max(1, k - 1);
        }
    }

    return LllResult{std::move(t), std::move(basis)};
}

QrFactorization lr_qr(const CMatrix& a, double delta, bool sort_reduced) {
    LllResult lr = lll_reduce(a, delta);
    QrFactorization f = sort_reduced ? sorted_qr(lr.reduced) : gram_schmidt_qr(lr.reduced);
    f.lr_transform = std::move(lr.transform);
    return f;
}

} // namespace vectorix
