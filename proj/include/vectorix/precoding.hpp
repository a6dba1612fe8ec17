#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vectorix/lll.hpp"
#include "vectorix/ordering.hpp"
#include "vectorix/qr.hpp"

namespace vectorix {

enum class SchemeKind { Dp, Thp, ThpOrdered, ErThp, ErThpLr, ErThpLrvb };

/// A precoding scheme plus the ordering it runs with. ThpOrdered accepts
/// any strategy; ErThp accepts per-tone strategies (identity/VB/IVB);
/// the lattice-reduced kinds fix their own ordering and carry delta.
struct SchemeSpec {
    SchemeKind kind = SchemeKind::Thp;
    OrderingStrategy ordering = OrderingStrategy::identity();
    double lll_delta = 0.75;

    bool lattice_reduced() const {
        return kind == SchemeKind::ErThpLr || kind == SchemeKind::ErThpLrvb;
    }
    std::string label() const;
    void validate() const;

    static SchemeSpec from_acronym(const std::string& name);
    /// DP, THP, THP-VB, THP-IVB, THP-DO, ER-THP, ER-THP-VB, ER-THP-LR,
    /// ER-THP-LRVB — the full comparison lineup.
    static std::vector<SchemeSpec> comparison_set();
};

/// One tone's precoder: transmit chain a -> E -> (modulo feedback with B)
/// -> F -> channel, receivers apply diagonal G and their own modulo.
/// perm[k] is the physical line served by feedback-loop slot k (for the
/// lattice-reduced kinds the loop works on reduced coordinates instead and
/// perm refers to reduced basis columns).
///
/// tau (loop slots) and tau_tilde (receiver lines) hold the modulo
/// thresholds after constellation pre-compensation; a slot with tau = 0
/// carries no data and transmits nothing. They stay empty until
/// configure_thresholds is called.
struct PrecoderBlocks {
    SchemeKind kind = SchemeKind::Thp;
    CMatrix E, B, F, G;
    Permutation perm;
    double g = 1.0;
    bool modulo_enabled = true;

    Eigen::VectorXd tau;
    Eigen::VectorXd tau_tilde;
    Eigen::VectorXd symbol_scale;  // per-line constellation scale (pre-compensation)

    int lines() const { return static_cast<int>(F.rows()); }
};

struct SnrProfile {
    Eigen::VectorXd gamma;  // linear, per line
    double gamma_base = 0.0;
};

/// Symmetric modulo: real and imaginary parts wrapped into [-tau/2, tau/2).
Complex modulo_reduce(Complex x, double tau);

/// Modulo threshold for a b-bit square constellation at unit mean energy;
/// odd b shares the value of b+1 (same underlying grid). b in 1..12.
double tau_for_bits(int b);

/// Modulo energy increase in dB for a b-bit load: 10*log10(M'/(M'-1)),
/// M' = 2^b (even b) or 2^(b+1) (odd b).
double delta_e_for_bits(int b);

/// Linear form of delta_e_for_bits; returns 1 for b = 0 (no modulo).
double delta_e_linear(int b);

/// Linear diagonal precoder (no modulo): F = H^{-1} diag(H) / g with the
/// per-line power scaling g, receivers divide by their direct gain.
PrecoderBlocks build_dp(const CMatrix& h);

/// Per-line THP from plain QR of H^H: B = diag(R)^{-1} R^H, F = Q,
/// G = diag(R)^{-1}.
PrecoderBlocks build_reference_thp(const CMatrix& h);

/// Per-line THP on an arbitrary processing order (QR consumes columns of
/// H^H in order pi); receivers stay diagonal for any order.
PrecoderBlocks build_ordered_thp(const CMatrix& h, const Permutation& pi);

/// As above but from a ready factorization of H^H. Rejects lattice-reduced
/// factorizations: the receiver matrix would not be diagonal.
PrecoderBlocks build_ordered_thp(const CMatrix& h, const QrFactorization& qr);

struct LrOptions {
    double delta = 0.75;
    bool with_vb = false;  // weakest-first QR on the reduced basis
};

/// Equal-rate THP: B = R^H diag(R)^{-1}, F = Q diag(R)^{-1} / g, G = g I,
/// g^2 = max_i sum_j |q_ij|^2 / r_jj^2. Without `lr` the QR of H^H runs in
/// order pi; with `lr` the basis is LLL-reduced first (pi ignored) and the
/// integer transform enters E.
PrecoderBlocks build_er_thp(const CMatrix& h, const Permutation& pi,
                            const std::optional<LrOptions>& lr = std::nullopt);

/// gamma_i = gamma_base / |G_ii|^2, which reduces to the per-scheme forms
/// (r_ii^2-weighted for per-line THP, constant for the equal-rate family).
SnrProfile snr_profile(const PrecoderBlocks& blocks, double gamma_base_linear);

/// Max-entry residual of G H F B^{-1} E - I.
double verify_zf(const PrecoderBlocks& blocks, const CMatrix& h);

/// Fills tau / tau_tilde / symbol_scale from a per-line bit allocation
/// (0 bits = line idle). Pre-compensates the modulo energy increase by
/// scaling each line's constellation and thresholds by 1/sqrt(delta_e).
/// Lattice-reduced blocks require a uniform allocation.
void configure_thresholds(PrecoderBlocks& blocks, const std::vector<int>& bits_per_line);

/// Runs the sequential modulo feedback loop on symbol vector a (already at
/// transmit scale) and applies the feedforward filter.
CVector precode(const PrecoderBlocks& blocks, const CVector& a);

} // namespace vectorix
