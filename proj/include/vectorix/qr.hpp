#pragma once

#include <optional>

#include "vectorix/matrix.hpp"

namespace vectorix {

/// Result of any of the QR variants below. With selection order
/// sigma = perm, column sigma(k) of the decomposed matrix equals
/// (Q*R).col(k); Q is unitary and R upper triangular with real,
/// non-negative diagonal (column phases are absorbed into Q).
///
/// When lr_transform is present the decomposed matrix is A*T (the
/// lattice-reduced basis), T unimodular with Gaussian-integer entries.
struct QrFactorization {
    CMatrix Q;
    CMatrix R;
    Permutation perm;
    std::optional<CMatrix> lr_transform;

    /// Reassembles the decomposed matrix (A, or A*T when lattice reduced).
    CMatrix reconstruct() const;
};

/// Relative pivot threshold: a residual below 1e-12 * ||A||_F means singular.
inline constexpr double kSingularRelThreshold = 1e-12;

/// Modified Gram-Schmidt QR, columns taken in natural order (perm = identity).
QrFactorization gram_schmidt_qr(const CMatrix& a);

/// At each step consumes the remaining column with the smallest residual
/// norm ("weakest first"); ties go to the lowest column index.
QrFactorization sorted_qr(const CMatrix& a);

/// Mirror of sorted_qr: largest residual first ("strongest first"),
/// i.e. QR with column pivoting.
QrFactorization pivoted_qr(const CMatrix& a);

/// Consumes columns exactly in the order given by `pi`.
QrFactorization forced_order_qr(const CMatrix& a, const Permutation& pi);

/// Brute-force search over all n! orders for the one maximizing
/// min_k r_kk^2. Guarded to n <= 8; ties resolved to the
/// lexicographically smallest order.
Permutation exhaustive_maxmin_order(const CMatrix& a);

} // namespace vectorix
