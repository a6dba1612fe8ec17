#pragma once

#include <string>
#include <vector>

#include "vectorix/bitloading.hpp"
#include "vectorix/channel.hpp"
#include "vectorix/ordering.hpp"
#include "vectorix/precoding.hpp"

namespace vectorix {

inline constexpr double kDefaultFramingOverhead = 0.12;

struct RateReport {
    std::string label;
    Eigen::MatrixXi bits;            // lines x tones
    std::vector<double> line_mbps;   // full precision
    double mean_mbps = 0.0;
    double min_mbps = 0.0;
    int failed_tones = 0;
};

/// One tone's blocks for a scheme; `perm` feeds the ordered kinds and is
/// ignored by DP, reference THP and the lattice-reduced kinds.
PrecoderBlocks build_scheme_blocks(const CMatrix& h, const SchemeSpec& scheme,
                                   const Permutation& perm);

/// Builds the scheme on every tone, loads bits through the corrected gap
/// formula and aggregates per-line rates. Dynamic ordering couples the
/// per-tone orders to the running bit totals; tones whose construction
/// fails are recorded and carry zero bits.
RateReport evaluate_scheme(const ChannelSet& set, const SchemeSpec& scheme,
                           const GapParams& gap,
                           double framing_overhead = kDefaultFramingOverhead);

} // namespace vectorix
