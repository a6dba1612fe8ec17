#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "vectorix/error.hpp"

namespace vectorix {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

bool has_finite_entries(const CMatrix& m);

/// Throws DimensionError if `m` contains NaN/Inf; `what` names the operand.
void require_finite(const CMatrix& m, const char* what);

void require_square(const CMatrix& m, const char* what);

/// Largest entry magnitude, the max-norm used by the block-level residual checks.
double max_abs(const CMatrix& m);

/// A processing order over lines: order()[k] is the physical line handled
/// k-th (0-based). Always a bijection on {0, ..., n-1}.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> order);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(order_.size()); }
    int operator[](int k) const { return order_[static_cast<std::size_t>(k)]; }
    const std::vector<int>& order() const { return order_; }

    /// inverse()[line] = position of `line` in the processing order.
    Permutation inverse() const;

    bool is_identity() const;

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.order_ == b.order_;
    }

private:
    std::vector<int> order_;
};

} // namespace vectorix
