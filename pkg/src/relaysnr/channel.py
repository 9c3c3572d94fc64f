"""Path-loss models, array responses, and the scatterer-based spatial
correlation of the direct channel.

These feed both the closed-form SNR engine and the brute-force oracle.
The BS array is modeled as a uniform linear array (half-wavelength spacing
along the y-axis by default); the closed forms only require unit-modulus
array responses, so the concrete geometry matters only where explicit
vectors are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import Deployment3D

__all__ = [
    "free_space_gain",
    "umi_street_canyon_gain",
    "ula_response",
    "UlaGeometry",
    "Scatterer",
    "CorrelationMatrix",
    "scatterer_correlation",
]

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


def free_space_gain(distance_m: float, wavelength_m: float) -> float:
    """Free-space power gain (lambda / (4 pi d))^2 with isotropic antennas."""
    if distance_m <= 0.0:
        raise ValueError(f"distance must be > 0, got {distance_m}")
    if wavelength_m <= 0.0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m}")
    return (wavelength_m / (4.0 * math.pi * distance_m)) ** 2


def umi_street_canyon_gain(distance_m: float, carrier_ghz: float) -> float:
    """Urban-microcell street-canyon power gain, anchored at 1 m.

    Path loss in dB is 32.4 + 20 log10(fc/GHz) + 31.9 log10(d/1m); the
    model is not defined below the 1 m reference distance.
    """
    if carrier_ghz <= 0.0:
        raise ValueError(f"carrier frequency must be > 0, got {carrier_ghz}")
    if distance_m < 1.0:
        raise ValueError(
            f"distance {distance_m} m is below the 1 m model reference"
        )
    loss_db = 32.4 + 20.0 * math.log10(carrier_ghz) + 31.9 * math.log10(distance_m)
    return 10.0 ** (-loss_db / 10.0)


def ula_response(
    num_antennas: int, spacing_over_wavelength: float, sin_angle: float
) -> np.ndarray:
    """Steering vector of a uniform linear array, unit-modulus entries.

    Entry m (0-based) is exp(j 2 pi spacing m sin_angle).
    """
    if num_antennas < 1:
        raise ValueError("need at least one antenna")
    if spacing_over_wavelength <= 0.0:
        raise ValueError("element spacing must be > 0")
    if not -1.0 <= sin_angle <= 1.0:
        raise ValueError(f"sin of angle must lie in [-1, 1], got {sin_angle}")
    m = np.arange(num_antennas)
    return np.exp(2j * math.pi * spacing_over_wavelength * m * sin_angle)


@dataclass(frozen=True)
class UlaGeometry:
    """Orientation and spacing of the BS uniform linear array."""

    spacing_over_wavelength: float = 0.5
    axis: tuple[float, float, float] = (0.0, 1.0, 0.0)

    def sin_toward(self, origin, point) -> float:
        """Sine of the arrival angle at `origin` from `point`, relative to
        the array axis (i.e. the projection of the unit direction onto it)."""
        direction = np.asarray(point, dtype=float) - np.asarray(origin, dtype=float)
        dist = np.linalg.norm(direction)
        if dist == 0.0:
            raise ValueError("cannot take a direction between coincident points")
        axis = np.asarray(self.axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        return float(np.dot(direction / dist, axis))

    def response_toward(self, num_antennas: int, origin, point) -> np.ndarray:
        return ula_response(
            num_antennas, self.spacing_over_wavelength, self.sin_toward(origin, point)
        )


@dataclass(frozen=True)
class Scatterer:
    """Point scatterer contributing one rank-one term to the direct-channel
    correlation. Weights are normalized across a scatterer set."""

    position: tuple[float, float, float]
    weight: float = 1.0

    def __post_init__(self):
        pos = tuple(float(c) for c in self.position)
        if len(pos) != 3:
            raise ValueError("scatterer position must have 3 coordinates")
        object.__setattr__(self, "position", pos)
        if not self.weight >= 0.0:
            raise ValueError(f"scatterer weight must be >= 0, got {self.weight}")


@dataclass(frozen=True)
class CorrelationMatrix:
    """Hermitian PSD spatial correlation of the direct BS-UE channel."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("correlation matrix must be square")
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def validate(self) -> None:
        """Check Hermitian symmetry and positive semidefiniteness."""
        mat = self.matrix
        scale = max(np.abs(mat).max(), 1.0)
        if np.abs(mat - mat.conj().T).max() > HERMITIAN_TOL * scale:
            raise ValueError("correlation matrix is not Hermitian")
        eigvals = np.linalg.eigvalsh(mat)
        if eigvals.min() < -PSD_TOL * max(self.trace, 1e-300):
            raise ValueError("correlation matrix is not positive semidefinite")

    def quad_form(self, vec: np.ndarray) -> float:
        """Real quadratic form v^H R v (clipped at 0 against roundoff)."""
        vec = np.asarray(vec, dtype=complex)
        value = float(np.real(vec.conj() @ self.matrix @ vec))
        return max(value, 0.0)


def scatterer_correlation(
    dep: Deployment3D,
    scatterers: list[Scatterer],
    beta3: float,
    num_antennas: int,
    array: UlaGeometry = UlaGeometry(),
) -> CorrelationMatrix:
    """Direct-channel correlation from a superposition of point scatterers.

    Each scatterer contributes a rank-one term along its BS-relative
    steering vector; the result is scaled so that trace(R) = M * beta3
    holds exactly.
    """
    if not scatterers:
        raise ValueError("need at least one scatterer")
    if beta3 < 0.0:
        raise ValueError(f"beta3 must be >= 0, got {beta3}")
    weights = np.array([s.weight for s in scatterers], dtype=float)
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("scatterer weights must not all be zero")
    weights = weights / total

    mat = np.zeros((num_antennas, num_antennas), dtype=complex)
    for weight, scat in zip(weights, scatterers):
        steer = array.response_toward(num_antennas, dep.bs_pos, scat.position)
        mat += weight * np.outer(steer, steer.conj()) / num_antennas
    mat *= beta3 * num_antennas
    # Rescale so the trace identity holds to the last bit.
    trace = float(np.trace(mat).real)
    if trace > 0.0:
        mat *= (beta3 * num_antennas) / trace
    return CorrelationMatrix(mat)
