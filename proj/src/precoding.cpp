#include "vectorix/precoding.hpp"

#include <cmath>

namespace vectorix {
namespace {

// Row-selection matrix S with S(k, perm[k]) = 1, so (S a)_k = a_{perm[k]}.
// This is P^T for the permutation convention used by the schemes.
CMatrix slot_matrix(const Permutation& perm) {
    const int n = perm.size();
    CMatrix s = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) s(k, perm[k]) = 1.0;
    return s;
}

int qam_order(int b) {
    return (b % 2 == 0) ? (1 << b) : (1 << (b + 1));
}

PrecoderBlocks thp_blocks(const CMatrix& h, const QrFactorization& qr) {
    if (qr.lr_transform)
        throw Error("lattice reduction cannot back a per-line THP: "
                    "receivers would need a non-diagonal equalizer");
    const int n = static_cast<int>(h.rows());
    PrecoderBlocks blocks;
    blocks.kind = qr.perm.is_identity() ? SchemeKind::Thp : SchemeKind::ThpOrdered;
    blocks.perm = qr.perm;
    blocks.E = slot_matrix(qr.perm);
    blocks.F = qr.Q;
    blocks.B = CMatrix::Identity(n, n);
    blocks.G = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double rkk = qr.R(k, k).real();
        blocks.G(qr.perm[k], qr.perm[k]) = 1.0 / rkk;
        for (int m = 0; m < k; ++m) blocks.B(k, m) = std::conj(qr.R(m, k)) / rkk;
    }
    blocks.g = 1.0;
    blocks.modulo_enabled = true;
    return blocks;
}

} // namespace

std::string SchemeSpec::label() const {
    switch (kind) {
    case SchemeKind::Dp: return "DP";
    case SchemeKind::Thp: return "THP";
    case SchemeKind::ThpOrdered:
        return ordering.kind == OrderingStrategy::Kind::Identity ? "THP-ID"
                                                                 : "THP-" + ordering.label();
    case SchemeKind::ErThp:
        return ordering.kind == OrderingStrategy::Kind::Identity ? "ER-THP"
                                                                 : "ER-THP-" + ordering.label();
    case SchemeKind::ErThpLr: return "ER-THP-LR";
    case SchemeKind::ErThpLrvb: return "ER-THP-LRVB";
    }
    return "?";
}

void SchemeSpec::validate() const {
    ordering.validate();
    if (!(lll_delta > 0.5 && lll_delta <= 1.0))
        throw DimensionError("lll delta must lie in (0.5, 1]");
    if (kind == SchemeKind::ErThp &&
        (ordering.kind == OrderingStrategy::Kind::Do ||
         ordering.kind == OrderingStrategy::Kind::FreqShare))
        throw DimensionError("equal-rate THP takes per-tone orderings only "
                             "(identity, VB or IVB)");
}

SchemeSpec SchemeSpec::from_acronym(const std::string& name) {
    SchemeSpec s;
    if (name == "DP") { s.kind = SchemeKind::Dp; return s; }
    if (name == "THP") { s.kind = SchemeKind::Thp; return s; }
    if (name == "THP-ID") { s.kind = SchemeKind::ThpOrdered; return s; }
    if (name == "THP-VB") { s = {SchemeKind::ThpOrdered, OrderingStrategy::vb()}; return s; }
    if (name == "THP-IVB") { s = {SchemeKind::ThpOrdered, OrderingStrategy::ivb()}; return s; }
    if (name == "THP-DO") {
        s = {SchemeKind::ThpOrdered, OrderingStrategy::dynamic_ordering()};
        return s;
    }
    if (name == "ER-THP") { s.kind = SchemeKind::ErThp; return s; }
    if (name == "ER-THP-VB") { s = {SchemeKind::ErThp, OrderingStrategy::vb()}; return s; }
    if (name == "ER-THP-IVB") { s = {SchemeKind::ErThp, OrderingStrategy::ivb()}; return s; }
    if (name == "ER-THP-LR") { s.kind = SchemeKind::ErThpLr; s.lll_delta = 0.75; return s; }
    if (name == "ER-THP-LRVB") { s.kind = SchemeKind::ErThpLrvb; s.lll_delta = 1.0; return s; }
    throw Error("unknown scheme acronym '" + name + "'");
}

std::vector<SchemeSpec> SchemeSpec::comparison_set() {
    std::vector<SchemeSpec> v;
    for (const char* name : {"DP", "THP", "THP-VB", "THP-IVB", "THP-DO", "ER-THP", "ER-THP-VB",
                             "ER-THP-LR", "ER-THP-LRVB"})
        v.push_back(from_acronym(name));
    return v;
}

Complex modulo_reduce(Complex x, double tau) {
    if (!(tau > 0.0)) throw DimensionError("modulo threshold must be positive");
    const auto wrap = [tau](double v) {
        double t = std::fmod(v + 0.5 * tau, tau);
        if (t < 0.0) t += tau;
        if (t >= tau) t -= tau;
        return t - 0.5 * tau;
    };
    return Complex(wrap(x.real()), wrap(x.imag()));
}

double tau_for_bits(int b) {
    if (b < 1 || b > 12) throw DimensionError("bit load must lie in 1..12");
    const double m = static_cast<double>(qam_order(b));
    const double d_min = std::sqrt(6.0 / (m - 1.0));
    return std::sqrt(m) * d_min;
}

double delta_e_for_bits(int b) {
    if (b < 1 || b > 12) throw DimensionError("bit load must lie in 1..12");
    return 10.0 * std::log10(delta_e_linear(b));
}

double delta_e_linear(int b) {
    if (b == 0) return 1.0;
    const double m = static_cast<double>(qam_order(b));
    return m / (m - 1.0);
}

PrecoderBlocks build_dp(const CMatrix& h) {
    require_square(h, "dp channel");
    require_finite(h, "dp channel");
    const int n = static_cast<int>(h.rows());
    const double tiny = kSingularRelThreshold * h.norm();
    for (int i = 0; i < n; ++i)
        if (std::abs(h(i, i)) < tiny)
            throw SingularMatrixError("diagonal precoding needs non-zero direct gains");

    Eigen::PartialPivLU<CMatrix> lu(h);
    CMatrix diag_h = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) diag_h(i, i) = h(i, i);
    CMatrix ftilde = lu.solve(diag_h);  // H^{-1} diag(H)
    if (!has_finite_entries(ftilde)) throw SingularMatrixError("channel is singular");

    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 = std::max(g2, ftilde.row(i).squaredNorm());

    PrecoderBlocks blocks;
    blocks.kind = SchemeKind::Dp;
    blocks.perm = Permutation::identity(n);
    blocks.g = std::sqrt(g2);
    blocks.E = CMatrix::Identity(n, n);
    blocks.B = CMatrix::Identity(n, n);
    blocks.F = ftilde / blocks.g;
    blocks.G = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) blocks.G(i, i) = blocks.g / h(i, i);
    blocks.modulo_enabled = false;
    return blocks;
}

PrecoderBlocks build_reference_thp(const CMatrix& h) {
    require_square(h, "thp channel");
    return thp_blocks(h, gram_schmidt_qr(h.adjoint()));
}

PrecoderBlocks build_ordered_thp(const CMatrix& h, const Permutation& pi) {
    require_square(h, "thp channel");
    PrecoderBlocks blocks = thp_blocks(h, forced_order_qr(h.adjoint(), pi));
    blocks.kind = SchemeKind::ThpOrdered;
    return blocks;
}

PrecoderBlocks build_ordered_thp(const CMatrix& h, const QrFactorization& qr) {
    require_square(h, "thp channel");
    PrecoderBlocks blocks = thp_blocks(h, qr);
    blocks.kind = SchemeKind::ThpOrdered;
    return blocks;
}

PrecoderBlocks build_er_thp(const CMatrix& h, const Permutation& pi,
                            const std::optional<LrOptions>& lr) {
    require_square(h, "er-thp channel");
    const int n = static_cast<int>(h.rows());

    QrFactorization qr = lr ? lr_qr(h.adjoint(), lr->delta, lr->with_vb)
                            : forced_order_qr(h.adjoint(), pi);

    PrecoderBlocks blocks;
    blocks.kind = !lr ? SchemeKind::ErThp
                      : (lr->with_vb ? SchemeKind::ErThpLrvb : SchemeKind::ErThpLr);
    blocks.perm = qr.perm;
    blocks.B = CMatrix::Identity(n, n);
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < k; ++m) blocks.B(k, m) = std::conj(qr.R(m, k)) / qr.R(m, m).real();

    CMatrix ftilde = qr.Q;
    for (int j = 0; j < n; ++j) ftilde.col(j) /= qr.R(j, j).real();
    double g2 = 0.0;
    for (int i = 0; i < n; ++i) g2 = std::max(g2, ftilde.row(i).squaredNorm());
    blocks.g = std::sqrt(g2);
    blocks.F = ftilde / blocks.g;
    blocks.G = blocks.g * CMatrix::Identity(n, n);
    blocks.E = lr ? CMatrix(slot_matrix(qr.perm) * qr.lr_transform->adjoint())
                  : slot_matrix(qr.perm);
    blocks.modulo_enabled = true;
    return blocks;
}

SnrProfile snr_profile(const PrecoderBlocks& blocks, double gamma_base_linear) {
    const int n = blocks.lines();
    SnrProfile snr;
    snr.gamma_base = gamma_base_linear;
    snr.gamma.resize(n);
    for (int i = 0; i < n; ++i) snr.gamma[i] = gamma_base_linear / std::norm(blocks.G(i, i));
    return snr;
}

double verify_zf(const PrecoderBlocks& blocks, const CMatrix& h) {
    const int n = blocks.lines();
    const CMatrix k = blocks.B.triangularView<Eigen::Lower>().solve(blocks.E);
    const CMatrix m = blocks.G * h * blocks.F * k - CMatrix::Identity(n, n);
    return max_abs(m);
}

void configure_thresholds(PrecoderBlocks& blocks, const std::vector<int>& bits_per_line) {
    const int n = blocks.lines();
    if (static_cast<int>(bits_per_line.size()) != n)
        throw DimensionError("bit allocation length does not match line count");

    Eigen::VectorXd tau_line = Eigen::VectorXd::Zero(n);
    blocks.symbol_scale = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < n; ++i) {
        const int b = bits_per_line[static_cast<std::size_t>(i)];
        if (b == 0) continue;
        const double scale =
            blocks.modulo_enabled ? 1.0 / std::sqrt(delta_e_linear(b)) : 1.0;
        blocks.symbol_scale[i] = scale;
        tau_line[i] = scale * tau_for_bits(b);
    }

    blocks.tau.resize(n);
    blocks.tau_tilde = tau_line;
    if (blocks.kind == SchemeKind::ErThpLr || blocks.kind == SchemeKind::ErThpLrvb) {
        // Integer precoding mixes lines inside the loop, which is only
        // invertible by per-line modulos when every threshold agrees.
        for (int i = 1; i < n; ++i)
            if (bits_per_line[static_cast<std::size_t>(i)] != bits_per_line[0])
                throw DimensionError("lattice-reduced schemes need a uniform bit allocation");
        blocks.tau.setConstant(tau_line[0]);
    } else {
        for (int k = 0; k < n; ++k) blocks.tau[k] = tau_line[blocks.perm[k]];
    }
}

CVector precode(const PrecoderBlocks& blocks, const CVector& a) {
    const int n = blocks.lines();
    if (a.size() != n) throw DimensionError("symbol vector length mismatch");
    if (blocks.modulo_enabled && blocks.tau.size() != n)
        throw Error("precoder thresholds not configured");

    const CVector v = blocks.E * a;
    CVector xt(n);
    for (int k = 0; k < n; ++k) {
        Complex acc = v[k];
        for (int m = 0; m < k; ++m) acc -= blocks.B(k, m) * xt[m];
        if (!blocks.modulo_enabled)
            xt[k] = acc;
        else if (blocks.tau[k] == 0.0)
            xt[k] = 0.0;  // idle slot transmits nothing
        else
            xt[k] = modulo_reduce(acc, blocks.tau[k]);
    }
    return blocks.F * xt;
}

} // namespace vectorix
