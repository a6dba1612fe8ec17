#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vectorix/matrix.hpp"

namespace vectorix {

/// DMT tone grid: tone k sits at f_start + k * delta_f.
struct TonePlan {
    double f_start_hz = 2.1e6;
    double delta_f_hz = 51.75e3;
    int count = 1;

    double tone_freq(int k) const { return f_start_hz + k * delta_f_hz; }

    /// Grid covering [f_start, f_end] at the given spacing.
    static TonePlan from_band(double f_start_hz, double f_end_hz, double delta_f_hz);

    /// 2.1-212 MHz at 51.75 kHz spacing (4057 tones).
    static TonePlan gfast_band();

    void validate() const;
};

/// Deterministic stand-in for a measured cable. Direct paths lose
/// 10^(-direct_atten_coeff*sqrt(f)*length/20) in amplitude; crosstalk
/// couplings grow linearly in frequency (fext_slope per Hz) relative to the
/// geometric mean of the direct gains, with a per-pair log-normal factor
/// (fext_asymmetry_spread dB std-dev) drawn once per (i, j) so that some
/// lines stay persistently weaker than others across the whole band.
struct SyntheticCableSpec {
    int lines = 8;
    double length_m = 100.0;
    std::uint64_t seed = 1;
    double direct_atten_coeff = 4.0e-5;  // dB per sqrt(Hz) per meter
    double fext_slope = 1.25e-8;         // relative coupling per Hz
    double fext_asymmetry_spread = 3.0;  // dB

    void validate() const;
};

/// Per-tone L x L channel matrices; entry (rx, tx) couples transmitter tx
/// into receiver rx.
struct ChannelSet {
    TonePlan plan;
    int lines = 0;
    std::vector<CMatrix> tones;

    const CMatrix& tone(int k) const { return tones[static_cast<std::size_t>(k)]; }
    int count() const { return static_cast<int>(tones.size()); }

    void validate() const;
};

ChannelSet generate_synthetic(const SyntheticCableSpec& spec, const TonePlan& plan);

/// Text format, one file per channel set:
///   # vectorix-channel v1, L=<n>, f_start=<Hz>, delta_f=<Hz>, count=<n>
///   tone_index,rx_line,tx_line,re,im
/// 0-based indices, floats with 17 significant digits (lossless round trip).
void save_channel(const ChannelSet& set, const std::string& path);
ChannelSet load_channel(const std::string& path);

/// min over rows of |h_ii|^2 / max_{j != i} |h_ij|^2; +inf for L = 1 or a
/// row with no crosstalk. Values above 1 mean the direct path dominates.
double diagonal_dominance(const CMatrix& h);

/// Per-line count of being picked first by weakest-first QR of H^H across
/// all tones. Counts sum to the tone count.
std::vector<long> weakest_line_histogram(const ChannelSet& set);

/// i.i.d. unit complex Gaussian L x L matrix from the counter RNG;
/// handy for verification sweeps over random channels.
CMatrix random_channel(int lines, std::uint64_t seed);

} // namespace vectorix
