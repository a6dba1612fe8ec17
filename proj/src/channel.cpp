#include "vectorix/channel.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "vectorix/qr.hpp"
#include "vectorix/rng.hpp"

namespace vectorix {
namespace {

// RNG stream ids for cable generation.
constexpr std::uint64_t kStreamPairCoupling = 1;
constexpr std::uint64_t kStreamDirectPhase = 2;
constexpr std::uint64_t kStreamFextPhase = 3;
constexpr std::uint64_t kStreamIid = 4;

std::uint64_t pack_tone_pair(int tone, int i, int j) {
    return (static_cast<std::uint64_t>(tone) << 16) |
           (static_cast<std::uint64_t>(i) << 8) | static_cast<std::uint64_t>(j);
}

} // namespace

TonePlan TonePlan::from_band(double f_start_hz, double f_end_hz, double delta_f_hz) {
    TonePlan plan;
    plan.f_start_hz = f_start_hz;
    plan.delta_f_hz = delta_f_hz;
    plan.count = static_cast<int>(std::floor((f_end_hz - f_start_hz) / delta_f_hz)) + 1;
    plan.validate();
    return plan;
}

TonePlan TonePlan::gfast_band() {
    return from_band(2.1e6, 212e6, 51.75e3);
}

void TonePlan::validate() const {
    if (!(f_start_hz > 0.0) || !(delta_f_hz > 0.0) || count < 1)
        throw DimensionError("tone plan requires f_start > 0, delta_f > 0, count >= 1");
}

void SyntheticCableSpec::validate() const {
    if (lines < 2) throw DimensionError("synthetic cable needs at least 2 lines");
    if (!(length_m > 0.0) || !(direct_atten_coeff > 0.0) || fext_slope < 0.0 ||
        fext_asymmetry_spread < 0.0)
        throw DimensionError("synthetic cable parameters must be positive");
}

void ChannelSet::validate() const {
    plan.validate();
    if (count() != plan.count)
        throw DimensionError("channel set holds " + std::to_string(count()) +
                             " tones, plan expects " + std::to_string(plan.count));
    for (const CMatrix& h : tones) {
        if (h.rows() != lines || h.cols() != lines)
            throw DimensionError("channel matrix dimension mismatch");
        require_finite(h, "channel matrix");
    }
}

ChannelSet generate_synthetic(const SyntheticCableSpec& spec, const TonePlan& plan) {
    spec.validate();
    plan.validate();
    const int n = spec.lines;

    // Per-pair coupling factors, fixed across the band.
    Eigen::MatrixXd chi = Eigen::MatrixXd::Ones(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                const double g = rng_gaussian(spec.seed, kStreamPairCoupling,
                                              static_cast<std::uint64_t>(i) * 256 + j);
                chi(i, j) = std::pow(10.0, spec.fext_asymmetry_spread * g / 20.0);
            }

    ChannelSet set;
    set.plan = plan;
    set.lines = n;
    set.tones.reserve(static_cast<std::size_t>(plan.count));

    for (int k = 0; k < plan.count; ++k) {
        const double f = plan.tone_freq(k);
        const double direct_db = spec.direct_atten_coeff * std::sqrt(f) * spec.length_m;
        const double direct_amp = std::pow(10.0, -direct_db / 20.0);
        // All direct gains share one magnitude, so the geometric mean is it.
        const double geo_amp = direct_amp;
        const double coupling = spec.fext_slope * f;

        CMatrix h(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::uint64_t ctr = pack_tone_pair(k, i, j);
                if (i == j) {
                    const double phi = 2.0 * M_PI * rng_u01(spec.seed, kStreamDirectPhase, ctr);
                    h(i, j) = direct_amp * Complex(std::cos(phi), std::sin(phi));
                } else {
                    const double phi = 2.0 * M_PI * rng_u01(spec.seed, kStreamFextPhase, ctr);
                    h(i, j) = chi(i, j) * coupling * geo_amp * Complex(std::cos(phi), std::sin(phi));
                }
            }
        }
        set.tones.push_back(std::move(h));
    }
    return set;
}

void save_channel(const ChannelSet& set, const std::string& path) {
    set.validate();
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw Error("cannot open '" + path + "' for writing");
    std::fprintf(fp, "# vectorix-channel v1, L=%d, f_start=%.17g, delta_f=%.17g, count=%d\n",
                 set.lines, set.plan.f_start_hz, set.plan.delta_f_hz, set.plan.count);
    for (int k = 0; k < set.count(); ++k)
        for (int i = 0; i < set.lines; ++i)
            for (int j = 0; j < set.lines; ++j)
                std::fprintf(fp, "%d,%d,%d,%.17g,%.17g\n", k, i, j,
                             set.tone(k)(i, j).real(), set.tone(k)(i, j).imag());
    std::fclose(fp);
}

ChannelSet load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");

    std::string line;
    long lineno = 0;

    // Header.
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    ++lineno;
    int lines = 0, count = 0;
    double f_start = 0.0, delta_f = 0.0;
    if (std::sscanf(line.c_str(), "# vectorix-channel v1, L=%d, f_start=%lf, delta_f=%lf, count=%d",
                    &lines, &f_start, &delta_f, &count) != 4)
        throw ParseError("bad header, expected '# vectorix-channel v1, L=..., f_start=..., "
                         "delta_f=..., count=...'", lineno);
    if (lines < 1 || count < 1) throw ParseError("bad header dimensions", lineno);

    ChannelSet set;
    set.plan.f_start_hz = f_start;
    set.plan.delta_f_hz = delta_f;
    set.plan.count = count;
    set.lines = lines;
    set.tones.assign(static_cast<std::size_t>(count), CMatrix::Zero(lines, lines));
    std::vector<char> seen(static_cast<std::size_t>(count) * lines * lines, 0);

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        int k = 0, i = 0, j = 0;
        double re = 0.0, im = 0.0;
        char trailing = 0;
        const int got = std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf%c", &k, &i, &j, &re, &im,
                                    &trailing);
        if (got < 5 || (got == 6 && trailing != '\r'))
            throw ParseError("expected 5 fields 'tone,rx,tx,re,im', got '" + line + "'", lineno);
        if (k < 0 || k >= count || i < 0 || i >= lines || j < 0 || j >= lines)
            throw ParseError("index out of range", lineno);
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ParseError("non-finite entry", lineno);
        const std::size_t flat =
            (static_cast<std::size_t>(k) * lines + i) * lines + j;
        if (seen[flat]) throw ParseError("duplicate entry", lineno);
        seen[flat] = 1;
        set.tones[static_cast<std::size_t>(k)](i, j) = Complex(re, im);
    }

    for (std::size_t flat = 0; flat < seen.size(); ++flat)
        if (!seen[flat]) {
            const int k = static_cast<int>(flat / (static_cast<std::size_t>(lines) * lines));
            throw Error("channel file incomplete: missing entries for tone " + std::to_string(k));
        }
    return set;
}

double diagonal_dominance(const CMatrix& h) {
    require_square(h, "diagonal_dominance input");
    const int n = static_cast<int>(h.rows());
    if (n == 1) return std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double xtalk = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) xtalk = std::max(xtalk, std::norm(h(i, j)));
        const double row = xtalk == 0.0 ? std::numeric_limits<double>::infinity()
                                        : std::norm(h(i, i)) / xtalk;
        worst = std::min(worst, row);
    }
    return worst;
}

std::vector<long> weakest_line_histogram(const ChannelSet& set) {
    if (set.count() == 0) throw DimensionError("empty channel set");
    std::vector<long> counts(static_cast<std::size_t>(set.lines), 0);
    for (int k = 0; k < set.count(); ++k) {
        const QrFactorization f = sorted_qr(set.tone(k).adjoint());
        ++counts[static_cast<std::size_t>(f.perm[0])];
    }
    return counts;
}

CMatrix random_channel(int lines, std::uint64_t seed) {
    CMatrix h(lines, lines);
    std::uint64_t ctr = 0;
    for (int i = 0; i < lines; ++i)
        for (int j = 0; j < lines; ++j) {
            const double re = rng_gaussian(seed, kStreamIid, ctr++);
            const double im = rng_gaussian(seed, kStreamIid, ctr++);
            h(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    return h;
}

} // namespace vectorix
