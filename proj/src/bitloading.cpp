#include "vectorix/bitloading.hpp"

#include <algorithm>

#include "vectorix/error.hpp"
#include "vectorix/precoding.hpp"

namespace vectorix {

void GapParams::validate() const {
    if (b_min > b_max || b_min < 1 || b_max > 12)
        throw DimensionError("bit-loading bounds must satisfy 1 <= b_min <= b_max <= 12");
}

int gap_bits(double gamma_linear, const GapParams& gap) {
    gap.validate();
    if (!(gamma_linear > 0.0)) return 0;
    const int b = static_cast<int>(std::floor(std::log2(1.0 + gamma_linear / gap.gap_linear())));
    if (b < gap.b_min) return 0;
    return std::min(b, gap.b_max);
}

int corrected_bits(double gamma_linear, const GapParams& gap) {
    int prev = gap_bits(gamma_linear, gap);
    for (int iter = 0; iter < 8; ++iter) {
        const int next = gap_bits(gamma_linear / delta_e_linear(prev), gap);
        if (next == prev) return next;
        if (iter > 0 && next > prev) return std::min(next, prev);  // oscillation
        prev = next;
    }
    return prev;
}

double aggregate_mbps(const std::vector<int>& bits_per_tone, double delta_f_hz,
                      double framing_overhead) {
    long total = 0;
    for (int b : bits_per_tone) total += b;
    return static_cast<double>(total) * delta_f_hz * (1.0 - framing_overhead) / 1e6;
}

} // namespace vectorix
