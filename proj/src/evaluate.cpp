#include "vectorix/evaluate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace vectorix {

PrecoderBlocks build_scheme_blocks(const CMatrix& h, const SchemeSpec& scheme,
                                   const Permutation& perm) {
    const int n = static_cast<int>(h.rows());
    switch (scheme.kind) {
    case SchemeKind::Dp: return build_dp(h);
    case SchemeKind::Thp: return build_reference_thp(h);
    case SchemeKind::ThpOrdered: return build_ordered_thp(h, perm);
    case SchemeKind::ErThp: return build_er_thp(h, perm);
    case SchemeKind::ErThpLr:
        return build_er_thp(h, Permutation::identity(n), LrOptions{scheme.lll_delta, false});
    case SchemeKind::ErThpLrvb:
        return build_er_thp(h, Permutation::identity(n), LrOptions{scheme.lll_delta, true});
    }
    throw Error("unreachable scheme kind");
}

RateReport evaluate_scheme(const ChannelSet& set, const SchemeSpec& scheme,
                           const GapParams& gap, double framing_overhead) {
    scheme.validate();
    gap.validate();
    if (set.count() == 0) throw DimensionError("empty channel set");
    const int n = set.lines;
    const double gamma_base = gap.gamma_base_linear();

    RateReport report;
    report.label = scheme.label();
    report.bits = Eigen::MatrixXi::Zero(n, set.count());

    const bool ordered = scheme.kind == SchemeKind::ThpOrdered || scheme.kind == SchemeKind::ErThp;
    OrderingPlan plan;
    if (ordered) plan = plan_orderings(set, scheme.ordering, gap);

    for (int t = 0; t < set.count(); ++t) {
        const CMatrix& h = set.tone(t);
        try {
            const PrecoderBlocks blocks = build_scheme_blocks(
                h, scheme,
                ordered ? plan.perms[static_cast<std::size_t>(t)] : Permutation::identity(n));
            const SnrProfile snr = snr_profile(blocks, gamma_base);
            for (int i = 0; i < n; ++i)
                report.bits(i, t) = corrected_bits(snr.gamma[i], gap);
        } catch (const SingularMatrixError&) {
            ++report.failed_tones;
        } catch (const ConvergenceError&) {
            ++report.failed_tones;
        }
    }

    report.line_mbps.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<int> row(static_cast<std::size_t>(set.count()));
        for (int t = 0; t < set.count(); ++t) row[static_cast<std::size_t>(t)] = report.bits(i, t);
        report.line_mbps[static_cast<std::size_t>(i)] =
            aggregate_mbps(row, set.plan.delta_f_hz, framing_overhead);
    }
    report.mean_mbps = std::accumulate(report.line_mbps.begin(), report.line_mbps.end(), 0.0) /
                       static_cast<double>(n);
    report.min_mbps = *std::min_element(report.line_mbps.begin(), report.line_mbps.end());
    return report;
}

} // namespace vectorix
