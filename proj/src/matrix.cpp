#include "vectorix/matrix.hpp"

#include <cmath>

namespace vectorix {

bool has_finite_entries(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

void require_finite(const CMatrix& m, const char* what) {
    if (!has_finite_entries(m))
        throw DimensionError(std::string(what) + ": non-finite entry");
}

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

double max_abs(const CMatrix& m) {
    double v = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            v = std::max(v, std::abs(m(i, j)));
    return v;
}

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
    const int n = size();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : order_) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw DimensionError("permutation is not a bijection on {0.." +
                                 std::to_string(n - 1) + "}");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(order));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(order_.size());
    for (int k = 0; k < size(); ++k) inv[static_cast<std::size_t>(order_[static_cast<std::size_t>(k)])] = k;
    return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
    for (int k = 0; k < size(); ++k)
        if (order_[static_cast<std::size_t>(k)] != k) return false;
    return true;
}

} // namespace vectorix
