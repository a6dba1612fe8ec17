#pragma once

#include <cmath>
#include <vector>

namespace vectorix {

/// Gap-formula parameters. Defaults are the standard G.fast evaluation
/// setting: 9.8 dB Shannon gap, 6 dB margin, 5 dB coding gain, 2..12 bits,
/// 64 dB baseline SNR (-76 dBm/Hz transmit PSD over -140 dBm/Hz noise).
struct GapParams {
    double shannon_gap_db = 9.8;
    double margin_db = 6.0;
    double coding_gain_db = 5.0;
    int b_min = 2;
    int b_max = 12;
    double gamma_base_db = 64.0;

    double gap_db() const { return shannon_gap_db + margin_db - coding_gain_db; }
    double gap_linear() const { return std::pow(10.0, gap_db() / 10.0); }
    double gamma_base_linear() const { return std::pow(10.0, gamma_base_db / 10.0); }

    void validate() const;
};

/// b = floor(log2(1 + gamma/Gap)), clamped: below b_min -> 0, above
/// b_max -> b_max.
int gap_bits(double gamma_linear, const GapParams& gap);

/// Gap-formula allocation with the modulo energy penalty folded in:
/// iterate b <- gap_bits(gamma / delta_e_linear(b)) to a fixed point,
/// taking the smaller allocation if the iteration oscillates (cap 8).
int corrected_bits(double gamma_linear, const GapParams& gap);

/// Sum of a line's bits over tones, scaled to Mbps after framing overhead.
double aggregate_mbps(const std::vector<int>& bits_per_tone, double delta_f_hz,
                      double framing_overhead);

} // namespace vectorix
