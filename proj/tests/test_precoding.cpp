#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vectorix/channel.hpp"
#include "vectorix/precoding.hpp"

using namespace vectorix;

namespace {

void check_block_invariants(const PrecoderBlocks& blocks, const CMatrix& h) {
    CHECK(verify_zf(blocks, h) < 1e-9);
    // Per-line power: rows of the effective feedforward at most 1.
    for (int i = 0; i < blocks.lines(); ++i)
        CHECK(blocks.F.row(i).squaredNorm() <= 1.0 + 1e-12);
    // Unit diagonal, lower triangular B; diagonal G.
    for (int k = 0; k < blocks.lines(); ++k) {
        CHECK(blocks.B(k, k) == Complex(1.0, 0.0));
        for (int m = k + 1; m < blocks.lines(); ++m) CHECK(blocks.B(k, m) == Complex(0.0, 0.0));
        for (int m = 0; m < blocks.lines(); ++m)
            if (m != k) CHECK(blocks.G(k, m) == Complex(0.0, 0.0));
    }
}

} // namespace

TEST_CASE("modulo_reduce basics") {
    CHECK(modulo_reduce(Complex(0.5, 0.5), 2.0) == Complex(0.5, 0.5));
    CHECK(modulo_reduce(Complex(1.5, 0.0), 2.0).real() == doctest::Approx(-0.5));
    for (int m = -3; m <= 3; ++m) {
        const Complex x(0.37, -0.81);
        const Complex shifted = x + Complex(2.0 * m, 2.0 * m);
        const Complex w = modulo_reduce(shifted, 2.0);
        CHECK(w.real() == doctest::Approx(x.real()).epsilon(1e-12));
        CHECK(w.imag() == doctest::Approx(x.imag()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(modulo_reduce(Complex(0, 0), 0.0), DimensionError);
}

TEST_CASE("modulo thresholds and energy increases match the reference table") {
    CHECK(tau_for_bits(2) == doctest::Approx(2.83).epsilon(2e-3));
    CHECK(tau_for_bits(4) == doctest::Approx(2.53).epsilon(2e-3));
    CHECK(tau_for_bits(3) == tau_for_bits(4));  // odd bits share the larger grid
    CHECK(delta_e_for_bits(2) == doctest::Approx(1.25).epsilon(1e-3));
    CHECK(delta_e_for_bits(4) == doctest::Approx(0.28).epsilon(2e-3));
    CHECK(delta_e_for_bits(12) == doctest::Approx(0.0011).epsilon(5e-2));
    CHECK(delta_e_linear(0) == 1.0);
    CHECK_THROWS_AS(tau_for_bits(0), DimensionError);
    CHECK_THROWS_AS(tau_for_bits(13), DimensionError);
}

TEST_CASE("reference THP on identity channel is transparent") {
    const CMatrix h = CMatrix::Identity(3, 3);
    const PrecoderBlocks blocks = build_reference_thp(h);
    CHECK(max_abs(blocks.E - h) == 0.0);
    CHECK(max_abs(blocks.B - h) == 0.0);
    CHECK(max_abs(blocks.F - h) == 0.0);
    CHECK(max_abs(blocks.G - h) == 0.0);
    const SnrProfile snr = snr_profile(blocks, 100.0);
    for (int i = 0; i < 3; ++i) CHECK(snr.gamma[i] == doctest::Approx(100.0));
}

TEST_CASE("reference THP on a diagonal channel scales per line") {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = Complex(0.0, 2.0);  // magnitude 2, arbitrary phase
    h(1, 1) = Complex(0.5, 0.0);
    const PrecoderBlocks blocks = build_reference_thp(h);
    check_block_invariants(blocks, h);
    const SnrProfile snr = snr_profile(blocks, 1.0);
    CHECK(snr.gamma[0] == doctest::Approx(4.0));
    CHECK(snr.gamma[1] == doctest::Approx(0.25));
}

TEST_CASE("reference THP SNR equals gamma_base r_ii^2 from the oracle") {
    const CMatrix h = random_channel(4, 314);
    const PrecoderBlocks blocks = build_reference_thp(h);
    check_block_invariants(blocks, h);

    CMatrix q_ref, r_ref;
    testing::householder_qr(h.adjoint(), q_ref, r_ref);
    const SnrProfile snr = snr_profile(blocks, 2.0);
    for (int i = 0; i < 4; ++i)
        CHECK(snr.gamma[i] ==
              doctest::Approx(2.0 * std::norm(r_ref(i, i))).epsilon(1e-9));
}

TEST_CASE("ordered THP with identity order reproduces the reference exactly") {
    const CMatrix h = random_channel(5, 404);
    const PrecoderBlocks ref = build_reference_thp(h);
    const PrecoderBlocks ord = build_ordered_thp(h, Permutation::identity(5));
    CHECK(max_abs(ref.E - ord.E) == 0.0);
    CHECK(max_abs(ref.B - ord.B) == 0.0);
    CHECK(max_abs(ref.F - ord.F) == 0.0);
    CHECK(max_abs(ref.G - ord.G) == 0.0);
}

TEST_CASE("ordered THP respects any order and stays diagonal at receivers") {
    const CMatrix h = random_channel(4, 505);
    const Permutation pi({2, 0, 3, 1});
    const PrecoderBlocks blocks = build_ordered_thp(h, pi);
    check_block_invariants(blocks, h);

    // gamma_i = gamma_base * r_{pos(i)}^2 where pos is the slot of line i.
    const QrFactorization f = forced_order_qr(h.adjoint(), pi);
    const SnrProfile snr = snr_profile(blocks, 3.0);
    const Permutation pos = pi.inverse();
    for (int i = 0; i < 4; ++i)
        CHECK(snr.gamma[i] ==
              doctest::Approx(3.0 * std::norm(f.R(pos[i], pos[i]))).epsilon(1e-12));
}

TEST_CASE("ordered THP on identity channel has flat SNR for any order") {
    const CMatrix h = CMatrix::Identity(3, 3);
    const PrecoderBlocks blocks = build_ordered_thp(h, Permutation({2, 0, 1}));
    const SnrProfile snr = snr_profile(blocks, 7.0);
    for (int i = 0; i < 3; ++i) CHECK(snr.gamma[i] == doctest::Approx(7.0));
}

TEST_CASE("per-line THP rejects lattice-reduced factorizations") {
    const CMatrix h = random_channel(3, 606);
    const QrFactorization f = lr_qr(h.adjoint(), 0.75, false);
    CHECK_THROWS_AS(build_ordered_thp(h, f), Error);
}

TEST_CASE("equal-rate THP on identity channel is transparent") {
    const CMatrix h = CMatrix::Identity(3, 3);
    const PrecoderBlocks blocks = build_er_thp(h, Permutation::identity(3));
    CHECK(blocks.g == doctest::Approx(1.0));
    CHECK(max_abs(blocks.F - h) < 1e-15);
    const SnrProfile snr = snr_profile(blocks, 9.0);
    for (int i = 0; i < 3; ++i) CHECK(snr.gamma[i] == doctest::Approx(9.0));
}

TEST_CASE("equal-rate THP on a unitary channel has unit gain") {
    // Simple 2x2 unitary: rotation mixed with a phase.
    CMatrix h(2, 2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    h << Complex(c, 0), Complex(-s, 0), Complex(0, s), Complex(0, c);
    CHECK(max_abs(h.adjoint() * h - CMatrix::Identity(2, 2)) < 1e-14);
    const PrecoderBlocks blocks = build_er_thp(h, Permutation::identity(2));
    CHECK(blocks.g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equal-rate THP gives identical SNR on every line and obeys the gain bound") {
    for (std::uint64_t seed : {7u, 8u, 9u}) {
        const CMatrix h = random_channel(4, seed);
        const Permutation vb = sorted_qr(h.adjoint()).perm;
        const PrecoderBlocks blocks = build_er_thp(h, vb);
        check_block_invariants(blocks, h);

        const SnrProfile snr = snr_profile(blocks, 5.0);
        for (int i = 1; i < 4; ++i)
            CHECK(std::abs(snr.gamma[i] - snr.gamma[0]) <= 1e-9 * 5.0);

        // g^2 <= 1 / min_k r_kk^2
        const QrFactorization f = forced_order_qr(h.adjoint(), vb);
        double min_r2 = 1e300;
        for (int k = 0; k < 4; ++k) min_r2 = std::min(min_r2, std::norm(f.R(k, k)));
        CHECK(blocks.g * blocks.g <= 1.0 / min_r2 * (1.0 + 1e-12));
    }
}

TEST_CASE("lattice-reduced equal-rate THP satisfies the chain conditions") {
    for (std::uint64_t seed : {31u, 32u}) {
        const CMatrix h = random_channel(4, seed);
        const PrecoderBlocks lr = build_er_thp(h, Permutation::identity(4),
                                               LrOptions{0.75, false});
        check_block_invariants(lr, h);
        const PrecoderBlocks lrvb =
            build_er_thp(h, Permutation::identity(4), LrOptions{1.0, true});
        check_block_invariants(lrvb, h);
    }
}

TEST_CASE("diagonal precoder inverts the channel with per-line scaling") {
    const CMatrix id = CMatrix::Identity(3, 3);
    const PrecoderBlocks unit = build_dp(id);
    CHECK(unit.g == doctest::Approx(1.0));
    CHECK(max_abs(unit.F - id) < 1e-15);

    CMatrix diag = CMatrix::Zero(2, 2);
    diag(0, 0) = Complex(2.0, 0.0);
    diag(1, 1) = Complex(0.0, 0.5);
    const PrecoderBlocks d = build_dp(diag);
    CHECK(d.g == doctest::Approx(1.0));
    const SnrProfile snr = snr_profile(d, 1.0);
    CHECK(snr.gamma[0] == doctest::Approx(4.0));
    CHECK(snr.gamma[1] == doctest::Approx(0.25));

    const CMatrix h = random_channel(4, 1234);
    const PrecoderBlocks blocks = build_dp(h);
    check_block_invariants(blocks, h);
    CHECK_FALSE(blocks.modulo_enabled);
}

TEST_CASE("diagonal precoder rejects zero direct gains") {
    CMatrix h = CMatrix::Identity(2, 2);
    h(1, 1) = 0.0;
    h(0, 1) = 1.0;
    h(1, 0) = 1.0;
    CHECK_THROWS_AS(build_dp(h), SingularMatrixError);
}

TEST_CASE("zf residual detects a corrupted feedforward matrix") {
    const CMatrix h = random_channel(3, 55);
    PrecoderBlocks blocks = build_reference_thp(h);
    CHECK(verify_zf(blocks, h) < 1e-9);
    blocks.F(1, 1) += Complex(1e-3, 0.0);
    CHECK(verify_zf(blocks, h) > 1e-4);
}

TEST_CASE("precode runs the feedback loop") {
    // Trivial blocks: x = F Gamma[a] = a for in-box symbols.
    const CMatrix h = CMatrix::Identity(2, 2);
    PrecoderBlocks blocks = build_reference_thp(h);
    configure_thresholds(blocks, {2, 2});
    CVector a(2);
    a << Complex(0.3, -0.2), Complex(-0.1, 0.4);
    const CVector x = precode(blocks, a);
    CHECK((x - a).norm() < 1e-15);
}

TEST_CASE("two-line feedback step is hand-checkable") {
    // H^H with correlated columns gives a non-trivial B(1,0).
    CMatrix hh(2, 2);
    hh << Complex(1.0, 0.0), Complex(0.8, 0.0), Complex(0.0, 0.0), Complex(0.6, 0.0);
    const CMatrix h = hh.adjoint();
    PrecoderBlocks blocks = build_reference_thp(h);
    // Plain GS: q0 = e0, r00 = 1, r01 = 0.8, r11 = 0.6 -> B(1,0) = 0.8/0.6.
    CHECK(blocks.B(1, 0).real() == doctest::Approx(0.8 / 0.6));

    configure_thresholds(blocks, {2, 2});
    const double tau = blocks.tau[1];
    CVector a(2);
    a << Complex(0.5, 0.0), Complex(0.25, 0.0);
    const CVector x = precode(blocks, a);
    // Hand evaluation of slot 1: wrap(a1 - B10 * a0).
    const Complex expected =
        modulo_reduce(a[1] - blocks.B(1, 0) * a[0], tau);
    const CVector xt = blocks.F.adjoint() * x;  // F unitary
    CHECK(std::abs(xt[1] - expected) < 1e-12);
}

TEST_CASE("precode linearized form recovers the loop output") {
    const CMatrix h = random_channel(4, 777);
    PrecoderBlocks blocks = build_ordered_thp(h, sorted_qr(h.adjoint()).perm);
    configure_thresholds(blocks, {4, 4, 4, 4});

    CVector a(4);
    for (int i = 0; i < 4; ++i)
        a[i] = blocks.symbol_scale[i] * Complex(0.3 - 0.1 * i, 0.05 * i);
    const CVector x = precode(blocks, a);

    // Recover d by rounding the loop state onto the threshold lattice, then
    // check x = F B^{-1} (E a - d).
    const CVector xt = blocks.F.adjoint() * x;
    const CVector ea = blocks.E * a;
    const CVector bxt = blocks.B * xt;
    CVector d(4);
    for (int k = 0; k < 4; ++k) {
        const Complex diff = ea[k] - bxt[k];
        const double tau = blocks.tau[k];
        d[k] = Complex(std::round(diff.real() / tau) * tau,
                       std::round(diff.imag() / tau) * tau);
        CHECK(std::abs(diff - d[k]) < 1e-9);
    }
    const CVector xt_lin = blocks.B.triangularView<Eigen::Lower>().solve(ea - d);
    CHECK((xt_lin - xt).norm() < 1e-9);
}

TEST_CASE("lattice-reduced blocks demand uniform allocations") {
    const CMatrix h = random_channel(3, 888);
    PrecoderBlocks blocks = build_er_thp(h, Permutation::identity(3), LrOptions{0.75, false});
    CHECK_THROWS_AS(configure_thresholds(blocks, {2, 4, 4}), DimensionError);
    CHECK_NOTHROW(configure_thresholds(blocks, {4, 4, 4}));
}

TEST_CASE("scheme acronyms round trip") {
    for (const SchemeSpec& s : SchemeSpec::comparison_set()) CHECK_NOTHROW(s.validate());
    CHECK(SchemeSpec::from_acronym("THP-DO").label() == "THP-DO");
    CHECK(SchemeSpec::from_acronym("ER-THP-LRVB").lll_delta == 1.0);
    CHECK_THROWS_AS(SchemeSpec::from_acronym("NOPE"), Error);
    SchemeSpec bad{SchemeKind::ErThp, OrderingStrategy::dynamic_ordering()};
    CHECK_THROWS_AS(bad.validate(), DimensionError);
}
