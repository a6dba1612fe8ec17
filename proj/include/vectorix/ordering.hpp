#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vectorix/bitloading.hpp"
#include "vectorix/channel.hpp"

namespace vectorix {

/// How line processing orders are chosen across the DMT band.
///  - Identity: natural order on every tone.
///  - Vb: weakest first per tone (max-min SNR on that tone).
///  - Ivb: strongest first per tone (greedy sum-rate).
///  - Do: sequential in tone index, putting the line with the smallest
///    bit total aggregated over earlier tones first.
///  - FreqShare: one strategy below f_start + b_do_hz, another above.
struct OrderingStrategy {
    enum class Kind { Identity, Vb, Ivb, Do, FreqShare };

    Kind kind = Kind::Identity;
    Kind share_low = Kind::Do;   // FreqShare only; must not nest FreqShare
    Kind share_high = Kind::Ivb;
    double b_do_hz = 0.0;

    static OrderingStrategy identity() { return {Kind::Identity}; }
    static OrderingStrategy vb() { return {Kind::Vb}; }
    static OrderingStrategy ivb() { return {Kind::Ivb}; }
    static OrderingStrategy dynamic_ordering() { return {Kind::Do}; }
    static OrderingStrategy freq_share(Kind low, Kind high, double b_do_hz);

    bool uses_do() const {
        return kind == Kind::Do ||
               (kind == Kind::FreqShare && (share_low == Kind::Do || share_high == Kind::Do));
    }
    std::string label() const;
    void validate() const;
};

struct OrderingPlan {
    std::vector<Permutation> perms;    // one per tone
    std::vector<long> aggregate_bits;  // per-line totals accumulated by DO tones
};

/// Weakest-first order for one tone: sorted_qr(H^H).perm.
Permutation vb_order(const CMatrix& h);

/// Strongest-first order for one tone: pivoted_qr(H^H).perm.
Permutation ivb_order(const CMatrix& h);

struct DoPlanResult {
    OrderingPlan plan;
    Eigen::MatrixXi bits;  // lines x tones, the loading that drove the ordering
    int failed_tones = 0;
};

/// Dynamic ordering over the whole set: tone 0 by VB, later tones by
/// ascending aggregated bits (ties: the tone's VB order, then line index).
/// Per tone it loads an ordered per-line THP via the corrected gap formula
/// and accumulates the result. Strictly sequential in tone index.
DoPlanResult do_plan(const ChannelSet& set, const GapParams& gap);

OrderingPlan plan_orderings(const ChannelSet& set, const OrderingStrategy& strategy,
                            const GapParams& gap);

} // namespace vectorix
