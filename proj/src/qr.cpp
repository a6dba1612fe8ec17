#include "vectorix/qr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vectorix {
namespace {

enum class PivotRule { Natural, MinResidual, MaxResidual, Forced };

// One Gram-Schmidt engine drives all variants so that e.g.
// forced_order_qr(a, sorted_qr(a).perm) reproduces sorted_qr(a) bitwise:
// the pivot scan only reads residual norms and never perturbs the sweep.
QrFactorization mgs_qr(const CMatrix& a, PivotRule rule, const Permutation* forced) {
    require_square(a, "qr input");
    require_finite(a, "qr input");
    const int n = static_cast<int>(a.rows());
    if (forced && forced->size() != n)
        throw DimensionError("forced order length does not match matrix dimension");

    const double tiny = kSingularRelThreshold * a.norm();

    CMatrix u = a;                       // residual columns, updated in place
    CMatrix q = CMatrix::Zero(n, n);
    CMatrix coef = CMatrix::Zero(n, n);  // coef(m, j): <q_m, a_j> by original column j
    std::vector<int> order(static_cast<std::size_t>(n));
    std::vector<char> used(static_cast<std::size_t>(n), 0);

    for (int k = 0; k < n; ++k) {
        int sel = -1;
        switch (rule) {
        case PivotRule::Natural:
            sel = k;
            break;
        case PivotRule::Forced:
            sel = (*forced)[k];
            if (used[static_cast<std::size_t>(sel)])
                throw DimensionError("forced order repeats a column");
            break;
        case PivotRule::MinResidual:
        case PivotRule::MaxResidual: {
            double best = 0.0;
            for (int j = 0; j < n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double norm2 = u.col(j).squaredNorm();
                const bool better = sel < 0 || (rule == PivotRule::MinResidual ? norm2 < best
                                                                               : norm2 > best);
                if (better) {
                    best = norm2;
                    sel = j;
                }
            }
            break;
        }
        }

        if (u.col(sel).norm() < tiny)
            throw SingularMatrixError("matrix is numerically singular at pivot " +
                                      std::to_string(k));

        // Second orthogonalization pass on the winning column; corrections are
        // folded into the stored coefficients so Q*R still reassembles A.
        for (int m = 0; m < k; ++m) {
            const Complex c = q.col(m).dot(u.col(sel));
            u.col(sel) -= c * q.col(m);
            coef(m, sel) += c;
        }

        const double rkk = u.col(sel).norm();
        if (rkk < tiny)
            throw SingularMatrixError("matrix is numerically singular at pivot " +
                                      std::to_string(k));
        coef(k, sel) = rkk;
        q.col(k) = u.col(sel) / rkk;
        used[static_cast<std::size_t>(sel)] = 1;
        order[static_cast<std::size_t>(k)] = sel;

        for (int j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const Complex c = q.col(k).dot(u.col(j));
            coef(k, j) = c;
            u.col(j) -= c * q.col(k);
        }
    }

    QrFactorization f;
    f.Q = std::move(q);
    f.R = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k)
        f.R.col(k) = coef.col(order[static_cast<std::size_t>(k)]);
    f.perm = Permutation(std::move(order));
    return f;
}

} // namespace

CMatrix QrFactorization::reconstruct() const {
    const int n = static_cast<int>(Q.rows());
    const CMatrix qr = Q * R;
    CMatrix a(n, n);
    for (int k = 0; k < n; ++k) a.col(perm[k]) = qr.col(k);
    return a;
}

QrFactorization gram_schmidt_qr(const CMatrix& a) {
    return mgs_qr(a, PivotRule::Natural, nullptr);
}

QrFactorization sorted_qr(const CMatrix& a) {
    return mgs_qr(a, PivotRule::MinResidual, nullptr);
}

QrFactorization pivoted_qr(const CMatrix& a) {
    return mgs_qr(a, PivotRule::MaxResidual, nullptr);
}

QrFactorization forced_order_qr(const CMatrix& a, const Permutation& pi) {
    return mgs_qr(a, PivotRule::Forced, &pi);
}

Permutation exhaustive_maxmin_order(const CMatrix& a) {
    require_square(a, "exhaustive_maxmin_order input");
    const int n = static_cast<int>(a.rows());
    if (n > 8)
        throw DimensionError("exhaustive ordering search is limited to 8 lines");

    std::vector<int> candidate(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) candidate[static_cast<std::size_t>(i)] = i;

    std::vector<int> best = candidate;
    double best_min = -1.0;
    do {
        const QrFactorization f = forced_order_qr(a, Permutation(candidate));
        double m = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) m = std::min(m, std::norm(f.R(k, k)));
        if (m > best_min) {
            best_min = m;
            best = candidate;
        }
    } while (std::next_permutation(candidate.begin(), candidate.end()));

    return Permutation(best);
}

} // namespace vectorix
