#include "vectorix/linksim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "vectorix/rng.hpp"

namespace vectorix {
namespace {

constexpr std::uint64_t kStreamData = 10;
constexpr std::uint64_t kStreamNoise = 11;

} // namespace

Constellation::Constellation(int bits) : bits_(bits) {
    tau_ = tau_for_bits(bits);
    const int order = (bits % 2 == 0) ? (1 << bits) : (1 << (bits + 1));
    side_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    spacing_ = std::sqrt(6.0 / (order - 1.0));
    const bool half = bits % 2 != 0;

    grid_index_.assign(static_cast<std::size_t>(side_) * side_, -1);
    points_.reserve(static_cast<std::size_t>(1) << bits);
    for (int ix = 0; ix < side_; ++ix) {
        for (int iy = 0; iy < side_; ++iy) {
            if (half && (ix + iy) % 2 != 0) continue;
            const double re = (2 * ix - (side_ - 1)) * 0.5 * spacing_;
            const double im = (2 * iy - (side_ - 1)) * 0.5 * spacing_;
            grid_index_[static_cast<std::size_t>(ix) * side_ + iy] =
                static_cast<int>(points_.size());
            points_.emplace_back(re, im);
        }
    }
}

const Constellation& Constellation::of(int bits) {
    if (bits < 1 || bits > 12) throw DimensionError("constellation bits must lie in 1..12");
    static std::map<int, Constellation> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(bits);
    if (it == cache.end()) it = cache.emplace(bits, Constellation(bits)).first;
    return it->second;
}

double Constellation::min_distance() const {
    return bits_ % 2 == 0 ? spacing_ : spacing_ * std::sqrt(2.0);
}

int Constellation::nearest(Complex z) const {
    const auto cell = [&](double v) {
        const double raw = v / spacing_ + 0.5 * (side_ - 1);
        return std::clamp(static_cast<int>(std::lround(raw)), 0, side_ - 1);
    };
    const int cx = cell(z.real());
    const int cy = cell(z.imag());

    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < side_; ++ring) {
        // Every cell at Chebyshev radius >= ring+1 is at least ring*spacing
        // away, so once a hit beats that bound the scan can stop.
        if (best >= 0) {
            const double bound = static_cast<double>(ring) * spacing_;
            if (best_d2 <= bound * bound) break;
        }
        for (int ix = cx - ring; ix <= cx + ring; ++ix) {
            if (ix < 0 || ix >= side_) continue;
            for (int iy = cy - ring; iy <= cy + ring; ++iy) {
                if (iy < 0 || iy >= side_) continue;
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
                const int idx = grid_index_[static_cast<std::size_t>(ix) * side_ + iy];
                if (idx < 0) continue;
                const double d2 = std::norm(points_[static_cast<std::size_t>(idx)] - z);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = idx;
                }
            }
        }
    }
    return best;
}

int qam_map_size(int bits) {
    return Constellation::of(bits).size();
}

Complex qam_map(int bit_group, const Constellation& c) {
    if (bit_group < 0 || bit_group >= c.size())
        throw DimensionError("bit group out of range for constellation");
    return c.point(bit_group);
}

int qam_demap(Complex symbol, const Constellation& c) {
    return c.nearest(symbol);
}

LinkReport run_link(const CMatrix& h, const PrecoderBlocks& blocks,
                    const std::vector<int>& bits_per_line, long n_symbols,
                    double noise_variance, std::uint64_t seed) {
    require_square(h, "link channel");
    const int n = blocks.lines();
    if (h.rows() != n) throw DimensionError("channel and precoder dimensions differ");
    if (static_cast<int>(bits_per_line.size()) != n)
        throw DimensionError("bit allocation length mismatch");

    PrecoderBlocks cfg = blocks;
    configure_thresholds(cfg, bits_per_line);

    LinkReport rep;
    rep.symbols = n_symbols;
    rep.symbol_errors.assign(static_cast<std::size_t>(n), 0);
    rep.symbols_counted.assign(static_cast<std::size_t>(n), 0);
    rep.mean_tx_power.assign(static_cast<std::size_t>(n), 0.0);
    rep.tx_power_stderr.assign(static_cast<std::size_t>(n), 0.0);
    rep.zf_residual = verify_zf(cfg, h);

    const double noise_sigma = std::sqrt(noise_variance / 2.0);

    Eigen::VectorXd slot_power = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sym_power = Eigen::VectorXd::Zero(n);  // per line

    std::vector<int> sent(static_cast<std::size_t>(n), 0);
    CVector a(n), xt(n), x(n), y(n);

    for (long s = 0; s < n_symbols; ++s) {
        for (int i = 0; i < n; ++i) {
            const int b = bits_per_line[static_cast<std::size_t>(i)];
            if (b == 0) {
                a[i] = 0.0;
                sent[static_cast<std::size_t>(i)] = -1;
                continue;
            }
            const Constellation& c = Constellation::of(b);
            const int g = static_cast<int>(rng_below(
                seed, kStreamData, static_cast<std::uint64_t>(s) * n + i,
                static_cast<std::uint32_t>(c.size())));
            sent[static_cast<std::size_t>(i)] = g;
            a[i] = cfg.symbol_scale[i] * c.point(g);
            sym_power[i] += std::norm(a[i]);
        }

        // Feedback loop, kept inline to expose the per-slot modulo output.
        const CVector v = cfg.E * a;
        for (int k = 0; k < n; ++k) {
            Complex acc = v[k];
            for (int m = 0; m < k; ++m) acc -= cfg.B(k, m) * xt[m];
            if (!cfg.modulo_enabled)
                xt[k] = acc;
            else if (cfg.tau[k] == 0.0)
                xt[k] = 0.0;
            else
                xt[k] = modulo_reduce(acc, cfg.tau[k]);
            slot_power[k] += std::norm(xt[k]);
        }
        x = cfg.F * xt;
        y = h * x;

        for (int i = 0; i < n; ++i) {
            const double p = std::norm(x[i]);
            rep.mean_tx_power[static_cast<std::size_t>(i)] += p;
            rep.tx_power_stderr[static_cast<std::size_t>(i)] += p * p;
            if (noise_variance > 0.0) {
                const std::uint64_t ctr = static_cast<std::uint64_t>(s) * n + i;
                y[i] += Complex(noise_sigma * rng_gaussian(seed, kStreamNoise, 2 * ctr),
                                noise_sigma * rng_gaussian(seed, kStreamNoise, 2 * ctr + 1));
            }
        }

        for (int i = 0; i < n; ++i) {
            if (sent[static_cast<std::size_t>(i)] < 0) continue;
            Complex z = cfg.G(i, i) * y[i];
            if (cfg.modulo_enabled) z = modulo_reduce(z, cfg.tau_tilde[i]);
            const Constellation& c = Constellation::of(bits_per_line[static_cast<std::size_t>(i)]);
            const int decided = c.nearest(z / cfg.symbol_scale[i]);
            ++rep.symbols_counted[static_cast<std::size_t>(i)];
            if (decided != sent[static_cast<std::size_t>(i)])
                ++rep.symbol_errors[static_cast<std::size_t>(i)];
        }
    }

    for (int i = 0; i < n; ++i) {
        const double mean = rep.mean_tx_power[static_cast<std::size_t>(i)] / n_symbols;
        const double mean_sq = rep.tx_power_stderr[static_cast<std::size_t>(i)] / n_symbols;
        const double var = std::max(0.0, mean_sq - mean * mean);
        rep.mean_tx_power[static_cast<std::size_t>(i)] = mean;
        rep.tx_power_stderr[static_cast<std::size_t>(i)] = std::sqrt(var / n_symbols);
    }

    rep.slot_energy_gain_db.assign(static_cast<std::size_t>(n),
                                   std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < n; ++k) {
        // Reference power: the slot's own constellation power (per-line for
        // permutation-type E, uniform otherwise).
        const int line = cfg.perm[k];
        const double ref = sym_power[line];
        if (ref > 0.0)
            rep.slot_energy_gain_db[static_cast<std::size_t>(k)] =
                10.0 * std::log10(slot_power[k] / ref);
    }
    return rep;
}

E2eSummary verify_e2e(const ChannelSet& set, const SchemeSpec& scheme, const GapParams& gap,
                      long n_symbols_per_tone, double noise_variance, std::uint64_t seed) {
    scheme.validate();
    const int n = set.lines;
    const RateReport rates = evaluate_scheme(set, scheme, gap);

    const bool ordered = scheme.kind == SchemeKind::ThpOrdered || scheme.kind == SchemeKind::ErThp;
    OrderingPlan plan;
    if (ordered) plan = plan_orderings(set, scheme.ordering, gap);

    E2eSummary sum;
    std::vector<long> line_errors(static_cast<std::size_t>(n), 0);
    std::vector<long> line_symbols(static_cast<std::size_t>(n), 0);

    for (int t = 0; t < set.count(); ++t) {
        const CMatrix& h = set.tone(t);
        std::vector<int> bits(static_cast<std::size_t>(n));
        bool any = false;
        for (int i = 0; i < n; ++i) {
            bits[static_cast<std::size_t>(i)] = rates.bits(i, t);
            any = any || bits[static_cast<std::size_t>(i)] > 0;
        }
        if (!any) continue;

        try {
            const PrecoderBlocks blocks = build_scheme_blocks(
                h, scheme,
                ordered ? plan.perms[static_cast<std::size_t>(t)] : Permutation::identity(n));
            const std::uint64_t tone_seed = mix64(seed + kRngGolden * static_cast<std::uint64_t>(t));
            const LinkReport rep =
                run_link(h, blocks, bits, n_symbols_per_tone, noise_variance, tone_seed);
            ++sum.active_tones;
            sum.max_zf_residual = std::max(sum.max_zf_residual, rep.zf_residual);
            for (int i = 0; i < n; ++i) {
                line_errors[static_cast<std::size_t>(i)] +=
                    rep.symbol_errors[static_cast<std::size_t>(i)];
                line_symbols[static_cast<std::size_t>(i)] +=
                    rep.symbols_counted[static_cast<std::size_t>(i)];
                const double p = rep.mean_tx_power[static_cast<std::size_t>(i)];
                sum.max_tx_power = std::max(sum.max_tx_power, p);
                sum.max_tx_power_excess =
                    std::max(sum.max_tx_power_excess,
                             p - 3.0 * rep.tx_power_stderr[static_cast<std::size_t>(i)]);
            }
        } catch (const SingularMatrixError&) {
            ++sum.failed_tones;
        } catch (const ConvergenceError&) {
            ++sum.failed_tones;
        }
    }

    sum.line_ser.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        sum.total_errors += line_errors[static_cast<std::size_t>(i)];
        sum.total_symbols += line_symbols[static_cast<std::size_t>(i)];
        if (line_symbols[static_cast<std::size_t>(i)] > 0)
            sum.line_ser[static_cast<std::size_t>(i)] =
                static_cast<double>(line_errors[static_cast<std::size_t>(i)]) /
                static_cast<double>(line_symbols[static_cast<std::size_t>(i)]);
    }
    return sum;
}

} // namespace vectorix
