import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relaysnr.channel import (
    CorrelationMatrix,
    Scatterer,
    UlaGeometry,
    free_space_gain,
    scatterer_correlation,
    ula_response,
    umi_street_canyon_gain,
)
from relaysnr.params import Deployment3D


class TestFreeSpace:
    def test_reference_values(self):
        # (lambda / (4 pi d))^2 evaluated directly
        assert free_space_gain(100.0, 0.02) == pytest.approx(
            2.5330295910584443e-10, rel=1e-12
        )
        assert free_space_gain(10.0, 0.02) == pytest.approx(
            2.5330295910584447e-08, rel=1e-12
        )

    def test_gain_unity_distance(self):
        wavelength = 0.02
        assert free_space_gain(wavelength / (4 * math.pi), wavelength) == pytest.approx(
            1.0, rel=1e-12
        )

    @given(
        st.floats(min_value=1e-3, max_value=1e6),
        st.floats(min_value=1e-4, max_value=10.0),
    )
    def test_inverse_square_is_exact(self, d, wavelength):
        assert free_space_gain(2 * d, wavelength) == free_space_gain(d, wavelength) / 4

    def test_nonpositive_distance_rejected(self):
        with pytest.raises(ValueError):
            free_space_gain(0.0, 0.02)
        with pytest.raises(ValueError):
            free_space_gain(-5.0, 0.02)


class TestUmiStreetCanyon:
    def test_reference_values(self):
        # -32.4 - 20 log10(15) - 31.9 log10(d)
        assert 10 * math.log10(umi_street_canyon_gain(100.0, 15.0)) == pytest.approx(
            -119.72182518111362, abs=1e-9
        )
        assert umi_street_canyon_gain(100.0, 15.0) == pytest.approx(
            1.0661479640086638e-12, rel=1e-12
        )
        assert 10 * math.log10(umi_street_canyon_gain(200.0, 15.0)) == pytest.approx(
            -129.32468204279462, abs=1e-9
        )

    def test_anchor_distance(self):
        # both logarithmic terms vanish at 1 m and 1 GHz
        assert 10 * math.log10(umi_street_canyon_gain(1.0, 1.0)) == pytest.approx(
            -32.4, abs=1e-12
        )

    def test_below_reference_distance_rejected(self):
        with pytest.raises(ValueError):
            umi_street_canyon_gain(0.5, 15.0)

    @given(
        st.floats(min_value=1.0, max_value=1e4),
        st.floats(min_value=1.0, max_value=1e4),
        st.floats(min_value=1.001, max_value=4.0),
    )
    def test_strictly_decreasing_in_distance_and_frequency(self, d, fc, factor):
        base = umi_street_canyon_gain(d, fc)
        assert umi_street_canyon_gain(d * factor, fc) < base
        assert umi_street_canyon_gain(d, fc * factor) < base


class TestUlaResponse:
    def test_broadside(self):
        np.testing.assert_allclose(ula_response(4, 0.5, 0.0), np.ones(4))

    def test_endfire_two_elements(self):
        np.testing.assert_allclose(
            ula_response(2, 0.5, 1.0), [1.0, -1.0], atol=1e-15
        )

    def test_quarter_turn_phases(self):
        # phase of element m is 2*pi*0.5*m*0.5 = m*pi/2
        response = ula_response(3, 0.5, 0.5)
        np.testing.assert_allclose(np.angle(response), [0.0, math.pi / 2, math.pi])

    @given(
        st.integers(min_value=1, max_value=128),
        st.floats(min_value=0.1, max_value=2.0),
        st.floats(min_value=-1.0, max_value=1.0),
    )
    def test_unit_modulus(self, m, spacing, sin_angle):
        response = ula_response(m, spacing, sin_angle)
        np.testing.assert_allclose(np.abs(response), 1.0, atol=1e-12)

    def test_invalid_angle_rejected(self):
        with pytest.raises(ValueError):
            ula_response(4, 0.5, 1.5)


class TestScattererCorrelation:
    dep = Deployment3D((0, 0, 10), (1000, 0, 0), (500, 10, 10))

    def test_single_broadside_scatterer(self):
        # scatterer on the BS boresight (zero projection on the array axis):
        # rank-one all-ones structure with trace M * beta3
        dep = Deployment3D((0, 0, 0), (10, 0, 0), (5, 1, 1))
        corr = scatterer_correlation(dep, [Scatterer((10, 0, 0))], 1.0, 2)
        np.testing.assert_allclose(corr.matrix, np.ones((2, 2)), atol=1e-12)
        assert corr.trace == pytest.approx(2.0, rel=1e-12)

    def test_two_orthogonal_scatterers_give_identity(self):
        # steering vectors (1,1) and (1,-1): equal-weight rank-one sum is I
        dep = Deployment3D((0, 0, 0), (10, 0, 0), (5, 1, 1))
        scatterers = [Scatterer((10, 0, 0)), Scatterer((0, 10, 0))]
        corr = scatterer_correlation(dep, scatterers, 1.0, 2)
        np.testing.assert_allclose(corr.matrix, np.eye(2), atol=1e-12)

    def test_four_scatterer_cluster_trace_identity(self):
        scatterers = [
            Scatterer((1000, 5, 0)),
            Scatterer((1000, -5, 0)),
            Scatterer((990, 5, 0)),
            Scatterer((990, -5, 0)),
        ]
        beta3 = 1.0661479640086638e-12
        m = 1024
        corr = scatterer_correlation(self.dep, scatterers, beta3, m)
        assert corr.trace == pytest.approx(m * beta3, rel=1e-9)
        corr.validate()

    def test_hermitian_psd_for_random_clusters(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            scatterers = [
                Scatterer(tuple(rng.uniform(100, 1000, 3)), rng.uniform(0.1, 2.0))
                for _ in range(rng.integers(1, 6))
            ]
            corr = scatterer_correlation(self.dep, scatterers, 1e-12, 16)
            corr.validate()
            assert corr.trace == pytest.approx(16 * 1e-12, rel=1e-9)

    def test_empty_scatterer_list_rejected(self):
        with pytest.raises(ValueError):
            scatterer_correlation(self.dep, [], 1e-12, 8)

    def test_quad_form_bounds(self):
        scatterers = [Scatterer((1000, 5, 0)), Scatterer((990, -5, 0))]
        corr = scatterer_correlation(self.dep, scatterers, 1e-12, 32)
        array = UlaGeometry()
        vec = array.response_toward(32, self.dep.bs_pos, self.dep.node_pos)
        quad = corr.quad_form(vec)
        assert 0.0 <= quad <= 32 * corr.trace * (1 + 1e-9)


class TestCorrelationMatrixValidation:
    def test_non_hermitian_rejected(self):
        mat = np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)
        with pytest.raises(ValueError):
            CorrelationMatrix(mat).validate()

    def test_indefinite_rejected(self):
        mat = np.array([[1.0, 2.0], [2.0, 1.0]], dtype=complex)
        with pytest.raises(ValueError):
            CorrelationMatrix(mat).validate()

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            CorrelationMatrix(np.ones((2, 3)))
