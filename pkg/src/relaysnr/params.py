"""Shared parameter types, dB/linear conversions, and deployment geometry.

Conventions used throughout the package:

* All internal computation is in linear units (watts, unitless power
  ratios). dB appears only at I/O boundaries.
* Power-like quantities (transmit power, noise, channel gains beta1/2/3,
  SNR) convert with 10*log10.
* Amplitude gains (the amplification factors applied by an active RIS
  element or an NCR, which enter every SNR formula squared) convert with
  20*log10. Every dB-valued field in the CLI is labelled with its
  convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SystemParams",
    "ChannelGains",
    "DirectCoupling",
    "Deployment3D",
    "db_to_linear_power",
    "linear_to_db_power",
    "db_to_linear_amplitude",
    "linear_to_db_amplitude",
    "dbm_to_watts",
    "watts_to_dbm",
    "distances",
]


def db_to_linear_power(value_db: float) -> float:
    """Convert a power-like dB value to a linear ratio (10*log10 convention)."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db_power(value: float) -> float:
    """Convert a linear power ratio to dB. Nonpositive input maps to -inf."""
    if value <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def db_to_linear_amplitude(value_db: float) -> float:
    """Convert an amplitude-gain dB value to linear (20*log10 convention)."""
    return 10.0 ** (value_db / 20.0)


def linear_to_db_amplitude(value: float) -> float:
    """Convert a linear amplitude gain to dB. Nonpositive input maps to -inf."""
    if value <= 0.0:
        return -math.inf
    return 20.0 * math.log10(value)


def dbm_to_watts(value_dbm: float) -> float:
    return 10.0 ** (value_dbm / 10.0) / 1000.0


def watts_to_dbm(value_w: float) -> float:
    if value_w <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value_w * 1000.0)


def _wrap_phase(phase: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(phase, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped = math.pi
    return wrapped


@dataclass(frozen=True)
class SystemParams:
    """Scalar system inputs shared by every SNR formula.

    power_w: UE transmit power in watts.
    noise_w: noise power per receiver (BS antenna, RIS element, NCR) in watts.
    num_bs_antennas: number of BS antennas.
    num_ris_elements: number of RIS elements.
    ncr_alpha_max: NCR amplitude-gain cap (linear; 0 means device disabled).
    aris_alpha_max: active-RIS per-element amplitude-gain cap (linear).
    """

    power_w: float
    noise_w: float
    num_bs_antennas: int
    num_ris_elements: int
    ncr_alpha_max: float = 0.0
    aris_alpha_max: float = 0.0

    def __post_init__(self):
        if not self.power_w > 0.0:
            raise ValueError(f"transmit power must be > 0, got {self.power_w}")
        if not self.noise_w > 0.0:
            raise ValueError(f"noise power must be > 0, got {self.noise_w}")
        if self.num_bs_antennas < 1:
            raise ValueError("need at least one BS antenna")
        if self.num_ris_elements < 1:
            raise ValueError("need at least one RIS element")
        if self.ncr_alpha_max < 0.0 or self.aris_alpha_max < 0.0:
            raise ValueError("amplitude-gain caps must be >= 0")


@dataclass(frozen=True)
class ChannelGains:
    """Large-scale power gains of the three links, as linear ratios.

    beta1: UE -> RIS/NCR, beta2: RIS/NCR -> BS, beta3: UE -> BS direct
    (0 when the direct path is blocked).
    """

    beta1: float
    beta2: float
    beta3: float = 0.0

    def __post_init__(self):
        for name in ("beta1", "beta2", "beta3"):
            value = getattr(self, name)
            if not value >= 0.0:
                raise ValueError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class DirectCoupling:
    """Complex coupling between the direct path and the cascaded path.

    The scalar whose magnitude and phase govern how the direct BS-UE
    channel interferes with the signal relayed through the assisting node.
    Phase is normalized into (-pi, pi].
    """

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.magnitude >= 0.0:
            raise ValueError(f"coupling magnitude must be >= 0, got {self.magnitude}")
        object.__setattr__(self, "phase", _wrap_phase(self.phase))

    @classmethod
    def from_complex(cls, value: complex) -> "DirectCoupling":
        return cls(abs(value), math.atan2(value.imag, value.real))

    @property
    def as_complex(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def real(self) -> float:
        return self.magnitude * math.cos(self.phase)


@dataclass(frozen=True)
class Deployment3D:
    """BS/UE/assisting-node positions in meters."""

    bs_pos: tuple[float, float, float]
    ue_pos: tuple[float, float, float]
    node_pos: tuple[float, float, float]

    def __post_init__(self):
        for name in ("bs_pos", "ue_pos", "node_pos"):
            pos = tuple(float(c) for c in getattr(self, name))
            if len(pos) != 3:
                raise ValueError(f"{name} must have 3 coordinates")
            object.__setattr__(self, name, pos)


def distances(dep: Deployment3D) -> tuple[float, float, float]:
    """Euclidean link distances (d1, d2, d3) of a deployment.

    d1 = UE to node, d2 = BS to node, d3 = BS to UE. Raises ValueError on a
    degenerate deployment (any two positions coincide).
    """
    d1 = math.dist(dep.ue_pos, dep.node_pos)
    d2 = math.dist(dep.bs_pos, dep.node_pos)
    d3 = math.dist(dep.bs_pos, dep.ue_pos)
    if d1 == 0.0 or d2 == 0.0 or d3 == 0.0:
        raise ValueError("degenerate deployment: two positions coincide")
    return d1, d2, d3
