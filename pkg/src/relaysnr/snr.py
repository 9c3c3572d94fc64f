"""Closed-form uplink SNRs for passive-RIS-, active-RIS-, and NCR-assisted
links.

Three families are covered:

* narrowband with the direct BS-UE path blocked,
* narrowband with a direct path, where the complex coupling between the
  direct and cascaded paths enters the formulas, and
* wideband averages over a random direct channel, where only the coupling
  power (quadratic form of the correlation matrix along the node-BS
  direction) survives the expectation.

All functions are pure and return SnrResult values in linear units; the
`breakdown` dictionary carries the named terms useful for diagnostics.
Degenerate inputs (zero gains, zero amplification) yield SNR 0, not an
error, so sweeps can pass through such corners.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .params import (
    ChannelGains,
    DirectCoupling,
    SystemParams,
    linear_to_db_power,
)

__all__ = [
    "SnrResult",
    "snr_passive_ris",
    "snr_active_ris",
    "snr_ncr",
    "ncr_snr_ceiling",
    "snr_passive_ris_direct",
    "snr_active_ris_direct",
    "snr_ncr_direct",
    "avg_snr_passive_ris",
    "avg_snr_active_ris",
    "avg_snr_ncr",
]


@dataclass(frozen=True)
class SnrResult:
    """An SNR value in linear units with optional named diagnostic terms."""

    linear: float
    breakdown: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.linear >= 0.0:
            raise ValueError(f"SNR must be >= 0, got {self.linear}")

    @property
    def db(self) -> float:
        return linear_to_db_power(self.linear)


def snr_passive_ris(p: SystemParams, g: ChannelGains) -> SnrResult:
    """Maximum SNR with a passive RIS and no direct path.

    With phase shifts aligning all N reflected components, the coherent
    gain scales the received power by N^2 and the BS array adds a factor M.
    """
    m, n = p.num_bs_antennas, p.num_ris_elements
    return SnrResult(p.power_w * g.beta1 * g.beta2 * n * n * m / p.noise_w)


def snr_active_ris(p: SystemParams, g: ChannelGains, alpha: float) -> SnrResult:
    """Maximum SNR with an active RIS (per-element amplitude `alpha`) and no
    direct path. Amplified element noise arrives through the same spatial
    direction as the signal and shows up in the denominator."""
    _check_alpha(alpha)
    m, n = p.num_bs_antennas, p.num_ris_elements
    a2 = alpha * alpha
    signal = a2 * p.power_w * g.beta1 * g.beta2 * n * n * m
    noise_amp = 1.0 + a2 * g.beta2 * m * n
    return SnrResult(
        signal / (p.noise_w * noise_amp),
        breakdown={"noise_amplification": noise_amp},
    )


def snr_ncr(p: SystemParams, g: ChannelGains, alpha: float) -> SnrResult:
    """Maximum SNR with an NCR (device amplitude gain `alpha`) and no direct
    path. The repeater forwards its own receiver noise, which bounds the
    achievable SNR (see ncr_snr_ceiling)."""
    _check_alpha(alpha)
    m = p.num_bs_antennas
    a2 = alpha * alpha
    signal = a2 * p.power_w * m * g.beta1 * g.beta2
    noise_amp = 1.0 + a2 * g.beta2 * m
    return SnrResult(
        signal / (p.noise_w * noise_amp),
        breakdown={"noise_amplification": noise_amp},
    )


def ncr_snr_ceiling(p: SystemParams, g: ChannelGains) -> SnrResult:
    """Upper bound of the NCR-assisted SNR over all amplification gains.

    Equals the SNR of the UE-NCR link if the repeater were replaced by a
    co-located receiver with identical noise statistics.
    """
    return SnrResult(p.power_w * g.beta1 / p.noise_w)


def snr_passive_ris_direct(
    p: SystemParams,
    g: ChannelGains,
    coupling_mag: float,
    direct_channel_power: float,
) -> SnrResult:
    """Maximum SNR with a passive RIS when a direct BS-UE path is present.

    `coupling_mag` is the magnitude of the coupling between the direct
    channel and the node-BS direction; `direct_channel_power` is the
    squared norm of the direct channel. Only the magnitude enters: the
    optimal phase configuration absorbs the coupling phase.
    """
    _check_direct(coupling_mag, direct_channel_power)
    m, n = p.num_bs_antennas, p.num_ris_elements
    cascaded = g.beta1 * g.beta2 * n * n * m
    cross = 2.0 * math.sqrt(g.beta1 * g.beta2) * n * coupling_mag
    total = p.power_w * (direct_channel_power + cascaded + cross) / p.noise_w
    return SnrResult(
        total,
        breakdown={
            "direct_snr": p.power_w * direct_channel_power / p.noise_w,
            "cascaded_snr": p.power_w * cascaded / p.noise_w,
            "cross_snr": p.power_w * cross / p.noise_w,
        },
    )


def active_ris_direct_coeffs(
    p: SystemParams, g: ChannelGains, coupling_mag: float
) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the ratio form governing the active-RIS SNR
    with a direct path: SNR = (A a^2 + B a) / (noise + C a^2) + direct term."""
    m, n = p.num_bs_antennas, p.num_ris_elements
    a_coef = (
        p.power_w * m * g.beta1 * g.beta2 * n * n
        - p.power_w * g.beta2 * n * coupling_mag * coupling_mag
    )
    b_coef = 2.0 * p.power_w * n * math.sqrt(g.beta1 * g.beta2) * coupling_mag
    c_coef = p.noise_w * g.beta2 * m * n
    return a_coef, b_coef, c_coef


def ncr_direct_coeffs(
    p: SystemParams, g: ChannelGains, coupling: DirectCoupling
) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the ratio form governing the NCR SNR with a
    direct path. Unlike the RIS cases, the coupling phase matters: B carries
    the real part and may be negative (destructive interference)."""
    m = p.num_bs_antennas
    a_coef = (
        p.power_w * m * g.beta1 * g.beta2
        - p.power_w * g.beta2 * coupling.magnitude * coupling.magnitude
    )
    b_coef = 2.0 * p.power_w * math.sqrt(g.beta1 * g.beta2) * coupling.real
    c_coef = p.noise_w * g.beta2 * m
    return a_coef, b_coef, c_coef


def _ratio_form(alpha: float, a_coef: float, b_coef: float, c_coef: float, noise_w: float) -> float:
    return (a_coef * alpha * alpha + b_coef * alpha) / (noise_w + c_coef * alpha * alpha)


def snr_active_ris_direct(
    p: SystemParams,
    g: ChannelGains,
    coupling_mag: float,
    direct_channel_power: float,
    alpha: float,
) -> SnrResult:
    """SNR of an active RIS with a direct path, all element amplitudes equal
    to `alpha` and phases optimally aligned (the optimal configuration).

    Only the coupling magnitude enters; the optimal phases absorb its phase.
    """
    _check_alpha(alpha)
    _check_direct(coupling_mag, direct_channel_power)
    a_coef, b_coef, c_coef = active_ris_direct_coeffs(p, g, coupling_mag)
    cascaded = _ratio_form(alpha, a_coef, b_coef, c_coef, p.noise_w)
    direct = p.power_w * direct_channel_power / p.noise_w
    return SnrResult(
        max(cascaded + direct, 0.0),
        breakdown={"cascaded_snr": cascaded, "direct_snr": direct},
    )


def snr_ncr_direct(
    p: SystemParams,
    g: ChannelGains,
    coupling: DirectCoupling,
    direct_channel_power: float,
    alpha: float,
) -> SnrResult:
    """SNR of an NCR with a direct path present.

    The real part of the coupling appears linearly, so a coupling with
    negative real part strictly reduces the SNR relative to an orthogonal
    direct path of the same magnitude.
    """
    _check_alpha(alpha)
    _check_direct(coupling.magnitude, direct_channel_power)
    a_coef, b_coef, c_coef = ncr_direct_coeffs(p, g, coupling)
    cascaded = _ratio_form(alpha, a_coef, b_coef, c_coef, p.noise_w)
    direct = p.power_w * direct_channel_power / p.noise_w
    return SnrResult(
        max(cascaded + direct, 0.0),
        breakdown={"cascaded_snr": cascaded, "direct_snr": direct},
    )


def avg_snr_passive_ris(p: SystemParams, g: ChannelGains) -> SnrResult:
    """Wideband average SNR with a passive RIS.

    Across subcarriers the direct channel is zero mean, so the cross term
    averages out and only the direct power M*beta3 adds to the cascaded
    gain.
    """
    m, n = p.num_bs_antennas, p.num_ris_elements
    value = p.power_w * (g.beta3 * m + g.beta1 * g.beta2 * n * n * m) / p.noise_w
    return SnrResult(
        value, breakdown={"direct_snr": p.power_w * g.beta3 * m / p.noise_w}
    )


def avg_snr_active_ris(
    p: SystemParams, g: ChannelGains, alpha: float, coupling_power: float
) -> SnrResult:
    """Wideband average SNR with an active RIS.

    `coupling_power` is the quadratic form of the direct-channel correlation
    matrix along the node-BS direction (the mean squared coupling); it
    enters as a penalty because the MMSE receiver must null the amplified
    noise along a direction that overlaps the direct channel.
    """
    _check_alpha(alpha)
    _check_coupling_power(coupling_power)
    m, n = p.num_bs_antennas, p.num_ris_elements
    a2 = alpha * alpha
    num = (
        p.power_w * a2 * m * g.beta1 * g.beta2 * n * n
        - p.power_w * a2 * g.beta2 * n * coupling_power
    )
    cascaded = num / (p.noise_w * (1.0 + a2 * g.beta2 * m * n))
    direct = p.power_w * g.beta3 * m / p.noise_w
    return SnrResult(
        max(cascaded + direct, 0.0),
        breakdown={"cascaded_snr": cascaded, "direct_snr": direct},
    )


def avg_snr_ncr(
    p: SystemParams, g: ChannelGains, alpha: float, coupling_power: float
) -> SnrResult:
    """Wideband average SNR with an NCR; see avg_snr_active_ris for the role
    of `coupling_power`."""
    _check_alpha(alpha)
    _check_coupling_power(coupling_power)
    m = p.num_bs_antennas
    a2 = alpha * alpha
    num = (
        p.power_w * a2 * m * g.beta1 * g.beta2
        - p.power_w * a2 * g.beta2 * coupling_power
    )
    cascaded = num / (p.noise_w * (1.0 + a2 * g.beta2 * m))
    direct = p.power_w * g.beta3 * m / p.noise_w
    return SnrResult(
        max(cascaded + direct, 0.0),
        breakdown={"cascaded_snr": cascaded, "direct_snr": direct},
    )


def _check_alpha(alpha: float) -> None:
    if not alpha >= 0.0:
        raise ValueError(f"amplification gain must be >= 0, got {alpha}")


def _check_direct(coupling_mag: float, direct_channel_power: float) -> None:
    if not coupling_mag >= 0.0:
        raise ValueError(f"coupling magnitude must be >= 0, got {coupling_mag}")
    if not direct_channel_power >= 0.0:
        raise ValueError(
            f"direct channel power must be >= 0, got {direct_channel_power}"
        )


def _check_coupling_power(coupling_power: float) -> None:
    if not coupling_power >= 0.0:
        raise ValueError(f"coupling power must be >= 0, got {coupling_power}")
