#include "vectorix/ordering.hpp"

#include <algorithm>
#include <cstdio>

#include "vectorix/precoding.hpp"
#include "vectorix/qr.hpp"

namespace vectorix {
namespace {

std::string kind_label(OrderingStrategy::Kind k) {
    switch (k) {
    case OrderingStrategy::Kind::Identity: return "ID";
    case OrderingStrategy::Kind::Vb: return "VB";
    case OrderingStrategy::Kind::Ivb: return "IVB";
    case OrderingStrategy::Kind::Do: return "DO";
    case OrderingStrategy::Kind::FreqShare: return "SHARE";
    }
    return "?";
}

Permutation per_tone_order(const CMatrix& h, OrderingStrategy::Kind kind) {
    switch (kind) {
    case OrderingStrategy::Kind::Identity: return Permutation::identity(static_cast<int>(h.rows()));
    case OrderingStrategy::Kind::Vb: return vb_order(h);
    case OrderingStrategy::Kind::Ivb: return ivb_order(h);
    default: throw DimensionError("not a per-tone ordering");
    }
}

// Dynamic ordering over the listed tones (ascending), leaving other tones
// of `out` untouched. Aggregates run over the listed tones only.
void do_plan_over(const ChannelSet& set, const std::vector<int>& tone_indices,
                  const GapParams& gap, DoPlanResult& out) {
    const int n = set.lines;
    const double gamma_base = gap.gamma_base_linear();
    std::vector<long>& agg = out.plan.aggregate_bits;

    bool first = true;
    for (int t : tone_indices) {
        const CMatrix& h = set.tone(t);
        Permutation order = Permutation::identity(n);
        try {
            if (first) {
                order = vb_order(h);
            } else {
                // Ascending aggregate; ties fall back to this tone's VB rank,
                // then to the line index.
                std::vector<int> lines(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) lines[static_cast<std::size_t>(i)] = i;
                bool tied = false;
                for (int i = 0; i < n && !tied; ++i)
                    for (int j = i + 1; j < n && !tied; ++j)
                        if (agg[static_cast<std::size_t>(i)] == agg[static_cast<std::size_t>(j)])
                            tied = true;
                std::vector<int> vb_rank(static_cast<std::size_t>(n), 0);
                if (tied) {
                    const Permutation vb = vb_order(h);
                    for (int k = 0; k < n; ++k) vb_rank[static_cast<std::size_t>(vb[k])] = k;
                }
                std::sort(lines.begin(), lines.end(), [&](int a, int b) {
                    const long aa = agg[static_cast<std::size_t>(a)];
                    const long ab = agg[static_cast<std::size_t>(b)];
                    if (aa != ab) return aa < ab;
                    const int ra = vb_rank[static_cast<std::size_t>(a)];
                    const int rb = vb_rank[static_cast<std::size_t>(b)];
                    if (ra != rb) return ra < rb;
                    return a < b;
                });
                order = Permutation(std::move(lines));
            }

            const PrecoderBlocks blocks = build_ordered_thp(h, order);
            const SnrProfile snr = snr_profile(blocks, gamma_base);
            for (int i = 0; i < n; ++i) {
                const int b = corrected_bits(snr.gamma[i], gap);
                out.bits(i, t) = b;
                agg[static_cast<std::size_t>(i)] += b;
            }
            out.plan.perms[static_cast<std::size_t>(t)] = order;
        } catch (const SingularMatrixError&) {
            // Tone unusable: no bits, aggregates unchanged.
            out.plan.perms[static_cast<std::size_t>(t)] = Permutation::identity(n);
            ++out.failed_tones;
        }
        first = false;
    }
}

} // namespace

OrderingStrategy OrderingStrategy::freq_share(Kind low, Kind high, double b_do_hz) {
    OrderingStrategy s;
    s.kind = Kind::FreqShare;
    s.share_low = low;
    s.share_high = high;
    s.b_do_hz = b_do_hz;
    s.validate();
    return s;
}

std::string OrderingStrategy::label() const {
    if (kind != Kind::FreqShare) return kind_label(kind);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s-%s@%.6gMHz", kind_label(share_low).c_str(),
                  kind_label(share_high).c_str(), b_do_hz / 1e6);
    return buf;
}

void OrderingStrategy::validate() const {
    if (kind == Kind::FreqShare) {
        if (share_low == Kind::FreqShare || share_high == Kind::FreqShare)
            throw DimensionError("frequency sharing cannot nest frequency sharing");
        if (b_do_hz < 0.0) throw DimensionError("shared bandwidth must be non-negative");
    }
}

Permutation vb_order(const CMatrix& h) {
    return sorted_qr(h.adjoint()).perm;
}

Permutation ivb_order(const CMatrix& h) {
    return pivoted_qr(h.adjoint()).perm;
}

DoPlanResult do_plan(const ChannelSet& set, const GapParams& gap) {
    if (set.count() == 0) throw DimensionError("empty channel set");
    DoPlanResult out;
    out.plan.perms.assign(static_cast<std::size_t>(set.count()),
                          Permutation::identity(set.lines));
    out.plan.aggregate_bits.assign(static_cast<std::size_t>(set.lines), 0);
    out.bits = Eigen::MatrixXi::Zero(set.lines, set.count());
    std::vector<int> all(static_cast<std::size_t>(set.count()));
    for (int t = 0; t < set.count(); ++t) all[static_cast<std::size_t>(t)] = t;
    do_plan_over(set, all, gap, out);
    return out;
}

OrderingPlan plan_orderings(const ChannelSet& set, const OrderingStrategy& strategy,
                            const GapParams& gap) {
    strategy.validate();
    if (set.count() == 0) throw DimensionError("empty channel set");
    const int n = set.lines;

    if (strategy.kind == OrderingStrategy::Kind::Do) return do_plan(set, gap).plan;

    OrderingPlan plan;
    plan.perms.assign(static_cast<std::size_t>(set.count()), Permutation::identity(n));
    plan.aggregate_bits.assign(static_cast<std::size_t>(n), 0);

    if (strategy.kind != OrderingStrategy::Kind::FreqShare) {
        for (int t = 0; t < set.count(); ++t) {
            try {
                plan.perms[static_cast<std::size_t>(t)] =
                    per_tone_order(set.tone(t), strategy.kind);
            } catch (const SingularMatrixError&) {
                // Keep identity; the tone will fail loading anyway.
            }
        }
        return plan;
    }

    // Tone belongs to the low part iff its frequency is below f_start + b_do.
    const double split = set.plan.f_start_hz + strategy.b_do_hz;
    std::vector<int> low, high;
    for (int t = 0; t < set.count(); ++t)
        (set.plan.tone_freq(t) < split ? low : high).push_back(t);

    DoPlanResult scratch;
    scratch.plan.perms = std::move(plan.perms);
    scratch.plan.aggregate_bits = std::move(plan.aggregate_bits);
    scratch.bits = Eigen::MatrixXi::Zero(n, set.count());

    for (int part = 0; part < 2; ++part) {
        const OrderingStrategy::Kind kind = part == 0 ? strategy.share_low : strategy.share_high;
        const std::vector<int>& tones = part == 0 ? low : high;
        if (kind == OrderingStrategy::Kind::Do) {
            do_plan_over(set, tones, gap, scratch);
        } else {
            for (int t : tones) {
                try {
                    scratch.plan.perms[static_cast<std::size_t>(t)] =
                        per_tone_order(set.tone(t), kind);
                } catch (const SingularMatrixError&) {
                }
            }
        }
    }
    return std::move(scratch.plan);
}

} // namespace vectorix
