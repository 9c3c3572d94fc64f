"""Optimal amplification gains under maximum-amplitude constraints.

Both the active RIS and the NCR maximize a ratio of the form

    f(a) = (A a^2 + B a) / (noise + C a^2)

over 0 <= a <= a_max. When B > 0 and C > 0 the numerator of f' has exactly
one positive real root,

    a* = (A noise + sqrt(A^2 noise^2 + B^2 C noise)) / (B C),

which is the unique interior maximizer (the second derivative there is
strictly negative); this holds for any sign of A. When B <= 0 the ratio is
monotone in a^2 or has an interior *minimum*, so the optimum sits on a
boundary and is resolved by comparing the endpoint values.

For the active RIS the equal-amplitude configuration is optimal among all
per-element amplitude vectors with the same cap (spreading a fixed
amplitude sum unevenly only increases the noise-amplification penalty), so
a single scalar gain fully describes the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ChannelGains, DirectCoupling, SystemParams
from .snr import (
    SnrResult,
    active_ris_direct_coeffs,
    avg_snr_active_ris,
    avg_snr_ncr,
    ncr_direct_coeffs,
    snr_active_ris_direct,
    snr_ncr_direct,
)

__all__ = [
    "GainCase",
    "GainSolution",
    "optimal_alpha_active",
    "optimal_alpha_ncr",
    "optimal_alpha_active_wideband",
    "optimal_alpha_ncr_wideband",
    "stationary_alpha",
]

# Relative tolerance for routing a coupling with negligible real part into
# the boundary-evaluation branch (the strict-inequality cases of the
# analysis leave measure-zero boundaries undefined).
REAL_PART_TOL = 1e-15


class GainCase(str, Enum):
    """Which branch of the constrained maximization produced the solution."""

    NO_DIRECT_MAX = "no-direct-max"
    INTERIOR_STATIONARY = "interior-stationary"
    BOUNDARY_ZERO = "boundary-zero"
    BOUNDARY_MAX = "boundary-max"


@dataclass(frozen=True)
class GainSolution:
    alpha: float
    snr: SnrResult
    case: GainCase


def stationary_alpha(a_coef: float, b_coef: float, c_coef: float, noise_w: float) -> float:
    """Unique positive stationary point of the ratio form; requires B, C > 0."""
    if b_coef <= 0.0 or c_coef <= 0.0:
        raise ValueError("stationary point formula needs B > 0 and C > 0")
    disc = a_coef * a_coef * noise_w * noise_w + b_coef * b_coef * c_coef * noise_w
    return (a_coef * noise_w + math.sqrt(disc)) / (b_coef * c_coef)


def optimal_alpha_active(
    p: SystemParams,
    g: ChannelGains,
    coupling_mag: float,
    alpha_max: float,
    direct_channel_power: float = 0.0,
) -> GainSolution:
    """Optimal per-element amplitude for an active RIS with a direct path.

    Without coupling the SNR is monotone in the amplitude and the cap is
    optimal. Otherwise excessive amplification hurts (the amplified noise
    overlaps the direct channel) and the optimum may be interior.
    """
    _check_cap(alpha_max)
    a_coef, b_coef, c_coef = active_ris_direct_coeffs(p, g, coupling_mag)

    def snr_at(alpha: float) -> SnrResult:
        return snr_active_ris_direct(p, g, coupling_mag, direct_channel_power, alpha)

    if coupling_mag == 0.0:
        return GainSolution(alpha_max, snr_at(alpha_max), GainCase.NO_DIRECT_MAX)

    if b_coef <= 0.0:
        # Degenerate cascade (beta1*beta2 == 0): the ratio is monotone in
        # the squared amplitude, so compare the boundaries; ties resolve to
        # zero for the lower radiated power.
        if a_coef * alpha_max * alpha_max > 0.0:
            return GainSolution(alpha_max, snr_at(alpha_max), GainCase.BOUNDARY_MAX)
        return GainSolution(0.0, snr_at(0.0), GainCase.BOUNDARY_ZERO)

    best = stationary_alpha(a_coef, b_coef, c_coef, p.noise_w)
    if best >= alpha_max:
        return GainSolution(alpha_max, snr_at(alpha_max), GainCase.BOUNDARY_MAX)
    return GainSolution(best, snr_at(best), GainCase.INTERIOR_STATIONARY)


def optimal_alpha_ncr(
    p: SystemParams,
    g: ChannelGains,
    coupling: DirectCoupling,
    alpha_max: float,
    direct_channel_power: float = 0.0,
) -> GainSolution:
    """Optimal NCR amplification gain with a direct path.

    Three regimes: no coupling (cap is optimal), destructive coupling
    (negative real part: the interior stationary point is a minimum, pick
    the better boundary, ties resolving to zero for the lower radiated
    power), and constructive coupling (same interior solution as the active
    RIS).
    """
    _check_cap(alpha_max)
    a_coef, b_coef, c_coef = ncr_direct_coeffs(p, g, coupling)

    def snr_at(alpha: float) -> SnrResult:
        return snr_ncr_direct(p, g, coupling, direct_channel_power, alpha)

    if coupling.magnitude == 0.0:
        return GainSolution(alpha_max, snr_at(alpha_max), GainCase.NO_DIRECT_MAX)

    negligible_real = abs(coupling.real) <= REAL_PART_TOL * coupling.magnitude
    if b_coef > 0.0 and not negligible_real:
        best = stationary_alpha(a_coef, b_coef, c_coef, p.noise_w)
        if best >= alpha_max:
            return GainSolution(alpha_max, snr_at(alpha_max), GainCase.BOUNDARY_MAX)
        return GainSolution(best, snr_at(best), GainCase.INTERIOR_STATIONARY)

    if negligible_real:
        b_coef = 0.0
    if a_coef * alpha_max * alpha_max + b_coef * alpha_max > 0.0:
        return GainSolution(alpha_max, snr_at(alpha_max), GainCase.BOUNDARY_MAX)
    return GainSolution(0.0, snr_at(0.0), GainCase.BOUNDARY_ZERO)


def optimal_alpha_active_wideband(
    p: SystemParams, g: ChannelGains, coupling_power: float, alpha_max: float
) -> GainSolution:
    """Optimal active-RIS amplitude for the wideband average SNR.

    The average has no linear term, so it is monotone in the amplitude: the
    cap is optimal when the mean cascaded contribution is positive, and zero
    amplification (falling back to the direct path alone) otherwise.
    """
    _check_cap(alpha_max)
    m, n = p.num_bs_antennas, p.num_ris_elements
    gain_sign = g.beta2 * n * (m * g.beta1 * n - coupling_power)
    if gain_sign > 0.0:
        return GainSolution(
            alpha_max,
            avg_snr_active_ris(p, g, alpha_max, coupling_power),
            GainCase.NO_DIRECT_MAX,
        )
    return GainSolution(
        0.0, avg_snr_active_ris(p, g, 0.0, coupling_power), GainCase.BOUNDARY_ZERO
    )


def optimal_alpha_ncr_wideband(
    p: SystemParams, g: ChannelGains, coupling_power: float, alpha_max: float
) -> GainSolution:
    """Optimal NCR gain for the wideband average SNR; see the active-RIS
    variant for the monotonicity argument."""
    _check_cap(alpha_max)
    m = p.num_bs_antennas
    gain_sign = g.beta2 * (m * g.beta1 - coupling_power)
    if gain_sign > 0.0:
        return GainSolution(
            alpha_max,
            avg_snr_ncr(p, g, alpha_max, coupling_power),
            GainCase.NO_DIRECT_MAX,
        )
    return GainSolution(
        0.0, avg_snr_ncr(p, g, 0.0, coupling_power), GainCase.BOUNDARY_ZERO
    )


def _check_cap(alpha_max: float) -> None:
    if not alpha_max > 0.0:
        raise ValueError(f"amplitude cap must be > 0, got {alpha_max}")
