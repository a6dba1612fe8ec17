#pragma once

#include "vectorix/qr.hpp"

namespace vectorix {

struct LllResult {
    CMatrix transform;  // unimodular T with Gaussian-integer entries
    CMatrix reduced;    // A * T
};

/// Complex LLL on the columns of `a`, working directly over Gaussian
/// integers (size reduction rounds to the nearest Gaussian integer).
/// delta in (0.5, 1]; aborts with ConvergenceError after 64*n^2 swaps.
LllResult lll_reduce(const CMatrix& a, double delta);

/// Lattice-reduced QR: A = Q R P^T T^{-1}. Runs lll_reduce first, then
/// plain (sort_reduced = false) or weakest-first (true) QR on the
/// reduced basis; the result carries T in lr_transform.
QrFactorization lr_qr(const CMatrix& a, double delta, bool sort_reduced);

} // namespace vectorix
