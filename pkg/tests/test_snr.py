import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaysnr.oracle import ExplicitChannelInstance, dense_mmse_snr, random_instance
from relaysnr.params import ChannelGains, DirectCoupling, SystemParams
from relaysnr.snr import (
    SnrResult,
    avg_snr_active_ris,
    avg_snr_ncr,
    avg_snr_passive_ris,
    ncr_snr_ceiling,
    snr_active_ris,
    snr_active_ris_direct,
    snr_ncr,
    snr_ncr_direct,
    snr_passive_ris,
    snr_passive_ris_direct,
)

# Constants of the reference narrowband setup: 20 dBm transmit power,
# -117 dBm noise, -87 dB first hop, free-space second hop at 100 m.
P = 0.1
SIGMA2 = 1.9952623149688826e-15
BETA1 = 1.9952623149688828e-09
BETA2_100M = 2.5330295910584443e-10
BETA2_90M = 3.12719702599808e-10

REF = SystemParams(P, SIGMA2, num_bs_antennas=1024, num_ris_elements=512)
REF_GAINS = ChannelGains(BETA1, BETA2_100M)

gain_strategy = st.floats(min_value=1e-14, max_value=1e-6)
alpha_strategy = st.floats(min_value=1e-3, max_value=1e5)


class TestSnrResult:
    def test_db_is_derived(self):
        assert SnrResult(100.0).db == pytest.approx(20.0, abs=1e-12)
        assert SnrResult(0.0).db == -math.inf

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            SnrResult(-1.0)


class TestPassiveRis:
    def test_reference_value(self):
        result = snr_passive_ris(REF, REF_GAINS)
        assert result.linear == pytest.approx(6799.549533372671, rel=1e-12)
        assert result.db == pytest.approx(38.324801418752436, abs=1e-9)

    def test_unit_case(self):
        p = SystemParams(1.0, 1.0, 1, 1)
        assert snr_passive_ris(p, ChannelGains(1.0, 1.0)).linear == 1.0

    def test_doubling_elements_quadruples_snr(self):
        doubled = SystemParams(P, SIGMA2, 1024, 1024)
        assert snr_passive_ris(doubled, REF_GAINS).linear == pytest.approx(
            4 * snr_passive_ris(REF, REF_GAINS).linear, rel=1e-15
        )


class TestActiveRis:
    def test_zero_gain_means_zero_snr(self):
        assert snr_active_ris(REF, REF_GAINS, 0.0).linear == 0.0

    def test_reference_value_at_90m(self):
        g = ChannelGains(BETA1, BETA2_90M)
        result = snr_active_ris(REF, g, 30.0)
        assert result.breakdown["noise_amplification"] == pytest.approx(
            1.1475596686929834, rel=1e-12
        )
        assert result.linear == pytest.approx(6583583.619390874, rel=1e-12)

    def test_high_gain_limit(self):
        # alpha -> inf: P beta1 N / sigma2
        g = ChannelGains(BETA1, BETA2_90M)
        limit = P * BETA1 * 512 / SIGMA2
        assert snr_active_ris(REF, g, 1e8).linear == pytest.approx(limit, rel=1e-6)

    @given(gain_strategy, gain_strategy, alpha_strategy, alpha_strategy)
    def test_strictly_increasing_in_gain(self, beta1, beta2, a1, a2):
        g = ChannelGains(beta1, beta2)
        lo, hi = sorted((a1, a2))
        if hi > lo:
            assert (
                snr_active_ris(REF, g, hi).linear > snr_active_ris(REF, g, lo).linear
            )


class TestNcr:
    def test_reference_value(self):
        result = snr_ncr(REF, REF_GAINS, 100.0)
        assert result.linear == pytest.approx(258.7111792979407, rel=1e-12)
        assert result.db == pytest.approx(24.128151956377163, abs=1e-9)

    def test_zero_gain_means_zero_snr(self):
        assert snr_ncr(REF, REF_GAINS, 0.0).linear == 0.0

    @given(gain_strategy, gain_strategy, alpha_strategy, alpha_strategy)
    def test_strictly_increasing_in_gain(self, beta1, beta2, a1, a2):
        g = ChannelGains(beta1, beta2)
        lo, hi = sorted((a1, a2))
        if hi > lo:
            assert snr_ncr(REF, g, hi).linear > snr_ncr(REF, g, lo).linear


class TestNcrCeiling:
    def test_reference_value(self):
        result = ncr_snr_ceiling(REF, REF_GAINS)
        assert result.linear == pytest.approx(1.0e5, rel=1e-12)
        assert result.db == pytest.approx(50.0, abs=1e-9)

    def test_unity_when_gain_matches_noise_over_power(self):
        g = ChannelGains(SIGMA2 / P, 1e-10)
        assert ncr_snr_ceiling(REF, g).linear == pytest.approx(1.0, rel=1e-12)

    def test_bounds_every_finite_gain(self):
        ceiling = ncr_snr_ceiling(REF, REF_GAINS).linear
        for alpha in (1.0, 10.0, 100.0, 1e4):
            assert snr_ncr(REF, REF_GAINS, alpha).linear < ceiling

    def test_approached_within_one_percent(self):
        # alpha^2 beta2 M >= 100 puts the SNR within 1% of the ceiling
        alpha = math.sqrt(100.0 / (BETA2_100M * 1024))
        ceiling = ncr_snr_ceiling(REF, REF_GAINS).linear
        assert snr_ncr(REF, REF_GAINS, alpha).linear >= ceiling * 0.99


class TestPassiveRisDirect:
    def test_reduces_without_direct_path(self):
        with_zero = snr_passive_ris_direct(REF, REF_GAINS, 0.0, 0.0)
        assert with_zero.linear == pytest.approx(
            snr_passive_ris(REF, REF_GAINS).linear, rel=1e-14
        )

    def test_coupling_enters_linearly(self):
        mag = 3e-6
        h3p = 1e-9
        base = snr_passive_ris_direct(REF, REF_GAINS, mag, h3p).linear
        doubled = snr_passive_ris_direct(REF, REF_GAINS, 2 * mag, h3p).linear
        added = 2 * math.sqrt(BETA1 * BETA2_100M) * 512 * mag * P / SIGMA2
        assert doubled - base == pytest.approx(added, rel=1e-9)

    def test_against_dense_oracle_with_structured_direct_channel(self):
        # Deployment with d1 = 20 m, d2 = 90 m, urban-microcell direct gain:
        # direct channel built with the exact coupling magnitude
        # sqrt(M beta3) and squared norm M beta3.
        m, n = 1024, 512
        beta3 = 1.0661479640086638e-12
        g = ChannelGains(6.333574327851305e-09, BETA2_90M, beta3)
        p = SystemParams(P, SIGMA2, m, n)
        rng = np.random.default_rng(11)
        a21 = np.exp(2j * np.pi * rng.random(m))
        ortho = np.exp(2j * np.pi * rng.random(m))
        ortho = ortho - (a21.conj() @ ortho) / m * a21
        ortho = ortho / np.linalg.norm(ortho)
        coupling_mag = math.sqrt(m * beta3)
        h3p = m * beta3
        h3 = (coupling_mag / m) * a21 + math.sqrt(h3p - coupling_mag**2 / m) * ortho
        inst = ExplicitChannelInstance(
            beta1=g.beta1,
            beta2=g.beta2,
            ris_rx_response=np.exp(2j * np.pi * rng.random(n)),
            bs_rx_response=a21,
            ris_tx_response=np.exp(2j * np.pi * rng.random(n)),
            direct_channel=h3,
        )
        closed = snr_passive_ris_direct(p, g, coupling_mag, h3p)
        oracle = dense_mmse_snr(inst, p, 1.0, variant="passive")
        assert closed.linear == pytest.approx(oracle.linear, rel=1e-9)

    def test_norm_expansion_matches_explicit_vectors(self):
        # || h3 + cascade ||^2 splits into direct power, coherent cascade
        # power, and the cross term, for any explicit realization.
        rng = np.random.default_rng(5)
        for m, n in ((2, 1), (8, 4), (16, 8)):
            g = ChannelGains(10 ** rng.uniform(-9, -6), 10 ** rng.uniform(-9, -6), 1e-9)
            p = SystemParams(1.0, 1e-12, m, n)
            inst = random_instance(g, m, n, rng)
            coupling = inst.coupling()
            closed = snr_passive_ris_direct(
                p, g, coupling.magnitude, inst.direct_channel_power()
            )
            oracle = dense_mmse_snr(inst, p, 1.0, variant="passive")
            assert closed.linear == pytest.approx(oracle.linear, rel=1e-9)


class TestActiveRisDirect:
    def test_reduces_without_direct_path(self):
        alpha = 17.0
        direct = snr_active_ris_direct(REF, REF_GAINS, 0.0, 0.0, alpha)
        assert direct.linear == pytest.approx(
            snr_active_ris(REF, REF_GAINS, alpha).linear, rel=1e-14
        )

    def test_hand_constructed_ratio(self):
        # A = 0.14, B = 0.4, C = 0.08: SNR(10) = (14 + 4) / (1 + 8) = 2
        p = SystemParams(1.0, 1.0, 4, 2)
        g = ChannelGains(1.0, 0.01)
        result = snr_active_ris_direct(p, g, 1.0, 0.0, 10.0)
        assert result.linear == pytest.approx(2.0, rel=1e-12)

    def test_matches_dense_inversion_at_desk_scale(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            m = int(rng.choice([2, 4, 8, 16]))
            n = int(rng.choice([1, 2, 4, 8]))
            g = ChannelGains(
                10 ** rng.uniform(-9, -6), 10 ** rng.uniform(-9, -6), 1e-8
            )
            p = SystemParams(1.0, 10 ** rng.uniform(-13, -10), m, n)
            inst = random_instance(g, m, n, rng)
            alpha = 10 ** rng.uniform(-1, 2)
            closed = snr_active_ris_direct(
                p,
                g,
                inst.coupling().magnitude,
                inst.direct_channel_power(),
                alpha,
            )
            oracle = dense_mmse_snr(inst, p, alpha, variant="active")
            assert closed.linear == pytest.approx(oracle.linear, rel=1e-9)


class TestNcrDirect:
    def test_reduces_without_direct_path(self):
        alpha = 250.0
        direct = snr_ncr_direct(REF, REF_GAINS, DirectCoupling(0.0), 0.0, alpha)
        assert direct.linear == pytest.approx(
            snr_ncr(REF, REF_GAINS, alpha).linear, rel=1e-14
        )

    def test_destructive_coupling_reduces_snr(self):
        mag, h3p, alpha = 1e-5, 1e-9, 50.0
        orthogonal = snr_ncr_direct(
            REF, REF_GAINS, DirectCoupling(mag, math.pi / 2), h3p, alpha
        )
        destructive = snr_ncr_direct(
            REF, REF_GAINS, DirectCoupling(mag, math.pi), h3p, alpha
        )
        assert destructive.linear < orthogonal.linear

    def test_matches_dense_inversion_at_desk_scale(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            m = int(rng.choice([2, 4, 8, 16]))
            g = ChannelGains(
                10 ** rng.uniform(-9, -6), 10 ** rng.uniform(-9, -6), 1e-8
            )
            p = SystemParams(1.0, 10 ** rng.uniform(-13, -10), m, 4)
            inst = random_instance(g, m, 4, rng)
            alpha = 10 ** rng.uniform(-1, 2)
            closed = snr_ncr_direct(
                p, g, inst.coupling(), inst.direct_channel_power(), alpha
            )
            oracle = dense_mmse_snr(inst, p, alpha, variant="ncr")
            assert closed.linear == pytest.approx(oracle.linear, rel=1e-9)


class TestWidebandAverages:
    BETA3 = 1.0661479640086638e-12
    G3 = ChannelGains(BETA1, BETA2_100M, BETA3)

    def test_passive_reduces_when_direct_gain_vanishes(self):
        g = ChannelGains(BETA1, BETA2_100M, 0.0)
        assert avg_snr_passive_ris(REF, g).linear == pytest.approx(
            snr_passive_ris(REF, g).linear, rel=1e-14
        )

    def test_passive_direct_only_baseline(self):
        g = ChannelGains(0.0, BETA2_100M, self.BETA3)
        assert avg_snr_passive_ris(REF, g).linear == pytest.approx(
            P * self.BETA3 * 1024 / SIGMA2, rel=1e-14
        )

    def test_active_null_space_reduces_to_no_direct(self):
        alpha = 30.0
        split = avg_snr_active_ris(REF, self.G3, alpha, 0.0)
        expected = (
            snr_active_ris(REF, self.G3, alpha).linear
            + P * self.BETA3 * 1024 / SIGMA2
        )
        assert split.linear == pytest.approx(expected, rel=1e-12)

    def test_active_zero_gain_is_direct_only(self):
        assert avg_snr_active_ris(REF, self.G3, 0.0, 1e-9).linear == pytest.approx(
            P * self.BETA3 * 1024 / SIGMA2, rel=1e-14
        )

    def test_ncr_null_space_reduces_to_no_direct(self):
        alpha = 100.0
        split = avg_snr_ncr(REF, self.G3, alpha, 0.0)
        expected = (
            snr_ncr(REF, self.G3, alpha).linear + P * self.BETA3 * 1024 / SIGMA2
        )
        assert split.linear == pytest.approx(expected, rel=1e-12)

    def test_ncr_rank_one_correlation_penalty(self):
        # correlation concentrated along the node-BS direction: the
        # quadratic form is M^2 beta3 and the penalty term is active
        m = 1024
        quad = m * m * self.BETA3
        alpha = 100.0
        result = avg_snr_ncr(REF, self.G3, alpha, quad)
        a2 = alpha * alpha
        expected = (
            P * a2 * (m * BETA1 * BETA2_100M - BETA2_100M * quad)
            / (SIGMA2 * (1 + a2 * BETA2_100M * m))
            + P * self.BETA3 * m / SIGMA2
        )
        assert result.linear == pytest.approx(expected, rel=1e-12)

    def test_ncr_high_gain_limit(self):
        quad = 1024 * self.BETA3  # isotropic correlation
        limit = (
            P * (1024 * BETA1 * BETA2_100M - BETA2_100M * quad)
            / (SIGMA2 * BETA2_100M * 1024)
            + P * self.BETA3 * 1024 / SIGMA2
        )
        assert avg_snr_ncr(REF, self.G3, 1e8, quad).linear == pytest.approx(
            limit, rel=1e-6
        )

    def test_negative_coupling_power_rejected(self):
        with pytest.raises(ValueError):
            avg_snr_ncr(REF, self.G3, 1.0, -1e-12)
