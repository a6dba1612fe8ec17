#pragma once

#include <cstdint>
#include <vector>

#include "vectorix/channel.hpp"
#include "vectorix/evaluate.hpp"
#include "vectorix/precoding.hpp"

namespace vectorix {

/// Square-shape b-bit QAM at unit mean energy. Even b uses the full
/// sqrt(M) x sqrt(M) grid; odd b keeps the half of the 2^(b+1) grid with
/// even (row+column) parity, which preserves the unit mean exactly and
/// fits the same modulo frame as the even-bit constellation above it.
class Constellation {
public:
    static const Constellation& of(int bits);  // cached, bits in 1..12

    int bits() const { return bits_; }
    int size() const { return static_cast<int>(points_.size()); }
    Complex point(int index) const { return points_[static_cast<std::size_t>(index)]; }
    const std::vector<Complex>& points() const { return points_; }

    double grid_spacing() const { return spacing_; }
    double tau() const { return tau_; }
    double min_distance() const;

    /// Exact nearest-point decision (ring search on the underlying grid).
    int nearest(Complex z) const;

private:
    explicit Constellation(int bits);

    int bits_ = 0;
    int side_ = 0;
    double spacing_ = 0.0;
    double tau_ = 0.0;
    std::vector<Complex> points_;
    std::vector<int> grid_index_;  // side*side cells, -1 where unused
};

int qam_map_size(int bits);

/// Symbol for a bit group (0 .. 2^b - 1) at unit scale.
Complex qam_map(int bit_group, const Constellation& c);

/// Nearest-point decision back to the bit group.
int qam_demap(Complex symbol, const Constellation& c);

struct LinkReport {
    long symbols = 0;
    std::vector<long> symbol_errors;    // per line
    std::vector<long> symbols_counted;  // per line, 0 for idle lines
    std::vector<double> mean_tx_power;  // E|x_i|^2 per line
    std::vector<double> tx_power_stderr;  // standard error of that estimate
    /// Modulo output power over constellation power per feedback slot, dB;
    /// NaN for idle slots. Slot k serves line perm[k] for the
    /// permutation-type schemes.
    std::vector<double> slot_energy_gain_db;
    double zf_residual = 0.0;
};

/// Monte Carlo run of the full chain on one tone: map, precode with the
/// modulo feedback, propagate y = Hx + w, scale, receiver modulo, detect.
/// Deterministic in (seed); lines with 0 bits stay silent.
LinkReport run_link(const CMatrix& h, const PrecoderBlocks& blocks,
                    const std::vector<int>& bits_per_line, long n_symbols,
                    double noise_variance, std::uint64_t seed);

struct E2eSummary {
    long total_errors = 0;
    long total_symbols = 0;
    double max_tx_power = 0.0;
    /// Largest per-line mean power minus three standard errors; stays below
    /// the cap whenever the true power satisfies the per-line constraint.
    double max_tx_power_excess = 0.0;
    double max_zf_residual = 0.0;
    std::vector<double> line_ser;
    int failed_tones = 0;
    int active_tones = 0;
};

/// Drives run_link across every tone of the set with the scheme's own
/// corrected bit allocation. noise_variance = 0 gives the noise-free
/// round trip, which must be error-free for every scheme.
E2eSummary verify_e2e(const ChannelSet& set, const SchemeSpec& scheme, const GapParams& gap,
                      long n_symbols_per_tone, double noise_variance, std::uint64_t seed);

} // namespace vectorix
