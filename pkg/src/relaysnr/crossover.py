"""How much NCR amplification is required to beat a RIS.

Every comparison "NCR SNR >= RIS SNR" reduces to a quadratic inequality

    A a^2 + B a + C >= 0

in the NCR amplitude gain a, whose nonnegativity set on a >= 0 is reported
as a CrossoverVerdict: a closed threshold [a_min, inf), a closed interval
[a_lo, a_hi], always satisfied, or never satisfied. Thresholds are closed
per the inequality direction: the boundary counts as the NCR matching the
RIS.

Without a direct path the quadratic degenerates and the threshold has the
closed forms

    vs passive RIS:  N / sqrt(1 - N^2 M beta2)
    vs active RIS:   a_A N / sqrt(1 - (N^2 - N) a_A^2 M beta2)

valid while the radicand is positive; otherwise the RIS wins for every
amplification gain. As beta2 -> 0 the thresholds converge to N and a_A N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .params import ChannelGains, DirectCoupling, SystemParams

__all__ = [
    "VerdictKind",
    "CrossoverVerdict",
    "required_alpha_vs_passive",
    "required_alpha_vs_active",
    "required_alpha_vs_passive_direct",
    "required_alpha_vs_active_direct",
    "required_alpha_wideband",
]

# Relative tolerance deciding when the quadratic coefficient A counts as
# zero (the strict sign cases of the analysis leave A = 0 undefined).
COEFF_TOL = 1e-14


class VerdictKind(str, Enum):
    THRESHOLD = "threshold"
    INTERVAL = "interval"
    RIS_ALWAYS_WINS = "ris_always_wins"
    NCR_ALWAYS_WINS = "ncr_always_wins"


@dataclass(frozen=True)
class CrossoverVerdict:
    """Set of NCR amplitude gains at which the NCR matches or beats the RIS.

    kind THRESHOLD: every alpha >= alpha_min (alpha_min > 0).
    kind INTERVAL: alpha_min <= alpha <= alpha_max (degenerate tangency is
        reported with alpha_min == alpha_max; alpha_min may be 0 in the
        wideband regime where the RIS average falls below the direct-only
        baseline).
    kind RIS_ALWAYS_WINS / NCR_ALWAYS_WINS: empty / full set.

    coeffs holds the (A, B, C) of the underlying quadratic when one was
    solved.
    """

    kind: VerdictKind
    alpha_min: float | None = None
    alpha_max: float | None = None
    coeffs: tuple[float, float, float] | None = None

    def required_alpha(self) -> float:
        """Minimum winning gain: 0 if the NCR always wins, inf if it never
        does, else the lower end of the winning set."""
        if self.kind is VerdictKind.NCR_ALWAYS_WINS:
            return 0.0
        if self.kind is VerdictKind.RIS_ALWAYS_WINS:
            return math.inf
        return self.alpha_min

    def ncr_wins(self, alpha: float) -> bool:
        """Whether the NCR matches or beats the RIS at this gain."""
        if self.kind is VerdictKind.NCR_ALWAYS_WINS:
            return True
        if self.kind is VerdictKind.RIS_ALWAYS_WINS:
            return False
        if self.kind is VerdictKind.THRESHOLD:
            return alpha >= self.alpha_min
        return self.alpha_min <= alpha <= self.alpha_max


def required_alpha_vs_passive(p: SystemParams, g: ChannelGains) -> CrossoverVerdict:
    """Required NCR gain to beat a passive RIS, no direct path."""
    m, n = p.num_bs_antennas, p.num_ris_elements
    radicand = 1.0 - n * n * m * g.beta2
    if radicand <= 0.0:
        return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS)
    return CrossoverVerdict(VerdictKind.THRESHOLD, alpha_min=n / math.sqrt(radicand))


def required_alpha_vs_active(
    p: SystemParams, g: ChannelGains, aris_alpha: float
) -> CrossoverVerdict:
    """Required NCR gain to beat an active RIS with per-element amplitude
    `aris_alpha`, no direct path."""
    if not aris_alpha > 0.0:
        raise ValueError(f"active-RIS amplitude must be > 0, got {aris_alpha}")
    m, n = p.num_bs_antennas, p.num_ris_elements
    radicand = 1.0 - (n * n - n) * aris_alpha * aris_alpha * m * g.beta2
    if radicand <= 0.0:
        return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS)
    return CrossoverVerdict(
        VerdictKind.THRESHOLD, alpha_min=aris_alpha * n / math.sqrt(radicand)
    )


def _passive_excess_gain(
    p: SystemParams, g: ChannelGains, coupling_mag: float
) -> float:
    """Passive-RIS SNR excess over the bare direct path, times noise/power."""
    m, n = p.num_bs_antennas, p.num_ris_elements
    return g.beta1 * g.beta2 * n * n * m + 2.0 * math.sqrt(
        g.beta1 * g.beta2
    ) * n * coupling_mag


def _active_excess_gain(
    p: SystemParams, g: ChannelGains, coupling_mag: float, aris_alpha: float
) -> float:
    """Active-RIS SNR excess over the bare direct path, times noise/power."""
    m, n = p.num_bs_antennas, p.num_ris_elements
    a2 = aris_alpha * aris_alpha
    num = (
        a2 * m * g.beta1 * g.beta2 * n * n
        - a2 * g.beta2 * n * coupling_mag * coupling_mag
        + 2.0 * aris_alpha * n * math.sqrt(g.beta1 * g.beta2) * coupling_mag
    )
    return num / (1.0 + a2 * g.beta2 * m * n)


def _direct_crossover(
    p: SystemParams, g: ChannelGains, coupling: DirectCoupling, ris_excess: float
) -> CrossoverVerdict:
    """Quadratic comparison of the NCR against a RIS whose SNR excess over
    the direct-only baseline is `ris_excess` (in noise/power units)."""
    m = p.num_bs_antennas
    mag2 = coupling.magnitude * coupling.magnitude
    a_coef = m * g.beta1 * g.beta2 - mag2 * g.beta2 - g.beta2 * m * ris_excess
    b_coef = 2.0 * coupling.real * math.sqrt(g.beta1 * g.beta2)
    c_coef = -ris_excess
    return _solve_crossover_quadratic(a_coef, b_coef, c_coef)


def required_alpha_vs_passive_direct(
    p: SystemParams, g: ChannelGains, coupling: DirectCoupling
) -> CrossoverVerdict:
    """Required NCR gain to beat a passive RIS when a direct path couples
    into both links. Destructive coupling (negative real part) can make the
    RIS unbeatable even though it would lose without the direct path."""
    return _direct_crossover(
        p, g, coupling, _passive_excess_gain(p, g, coupling.magnitude)
    )


def required_alpha_vs_active_direct(
    p: SystemParams, g: ChannelGains, coupling: DirectCoupling, aris_alpha: float
) -> CrossoverVerdict:
    """Required NCR gain to beat an active RIS with a direct path present.

    `aris_alpha` is the per-element amplitude the RIS actually uses; pass
    the constrained-optimal amplitude for the fair comparison.
    """
    if not aris_alpha > 0.0:
        raise ValueError(f"active-RIS amplitude must be > 0, got {aris_alpha}")
    return _direct_crossover(
        p, g, coupling, _active_excess_gain(p, g, coupling.magnitude, aris_alpha)
    )


def required_alpha_wideband(
    p: SystemParams,
    g: ChannelGains,
    coupling_power: float,
    versus: str = "passive",
    aris_alpha: float | None = None,
) -> CrossoverVerdict:
    """Required NCR gain for the wideband average SNRs.

    Averaging removes the coupling's linear term and replaces its squared
    magnitude by `coupling_power`; with coupling_power = 0 (the node-BS
    direction in the null space of the direct-channel correlation) the
    verdict coincides with the no-direct one.
    """
    if not coupling_power >= 0.0:
        raise ValueError(f"coupling power must be >= 0, got {coupling_power}")
    m, n = p.num_bs_antennas, p.num_ris_elements
    if versus == "passive":
        ris_excess = g.beta1 * g.beta2 * n * n * m
    elif versus == "active":
        if aris_alpha is None or not aris_alpha >= 0.0:
            raise ValueError("comparison against the active RIS needs aris_alpha >= 0")
        a2 = aris_alpha * aris_alpha
        num = a2 * m * g.beta1 * g.beta2 * n * n - a2 * g.beta2 * n * coupling_power
        ris_excess = num / (1.0 + a2 * g.beta2 * m * n)
    else:
        raise ValueError(f"unknown comparison target {versus!r}")
    a_coef = m * g.beta1 * g.beta2 - coupling_power * g.beta2 - g.beta2 * m * ris_excess
    c_coef = -ris_excess
    return _solve_crossover_quadratic(a_coef, 0.0, c_coef)


def _solve_crossover_quadratic(
    a_coef: float, b_coef: float, c_coef: float
) -> CrossoverVerdict:
    """Nonnegativity set of A a^2 + B a + C on a >= 0, as a verdict."""
    coeffs = (a_coef, b_coef, c_coef)
    scale = abs(a_coef) + abs(b_coef) + abs(c_coef)
    if scale == 0.0:
        # Identically zero difference: the NCR ties everywhere.
        return CrossoverVerdict(VerdictKind.NCR_ALWAYS_WINS, coeffs=coeffs)

    if abs(a_coef) <= COEFF_TOL * scale:
        return _solve_linear(b_coef, c_coef, coeffs)

    disc = b_coef * b_coef - 4.0 * a_coef * c_coef
    if a_coef > 0.0:
        if disc <= 0.0:
            return CrossoverVerdict(VerdictKind.NCR_ALWAYS_WINS, coeffs=coeffs)
        sqrt_disc = math.sqrt(disc)
        upper = (-b_coef + sqrt_disc) / (2.0 * a_coef)
        if upper <= 0.0:
            return CrossoverVerdict(VerdictKind.NCR_ALWAYS_WINS, coeffs=coeffs)
        lower = (-b_coef - sqrt_disc) / (2.0 * a_coef)
        if lower > 0.0 and c_coef > 0.0:
            # Wins on [0, lower] and again on [upper, inf): not expressible
            # as a single verdict and unreachable for the comparisons built
            # above (it would need C > 0 together with two positive roots).
            raise ValueError("crossover set is not a threshold or an interval")
        return CrossoverVerdict(VerdictKind.THRESHOLD, alpha_min=upper, coeffs=coeffs)

    # a_coef < 0: the satisfied set, if any, is between the roots.
    if disc < 0.0:
        return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS, coeffs=coeffs)
    sqrt_disc = math.sqrt(disc)
    lo = (-b_coef + sqrt_disc) / (2.0 * a_coef)
    hi = (-b_coef - sqrt_disc) / (2.0 * a_coef)
    if hi < 0.0:
        return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS, coeffs=coeffs)
    return CrossoverVerdict(
        VerdictKind.INTERVAL, alpha_min=max(lo, 0.0), alpha_max=hi, coeffs=coeffs
    )


def _solve_linear(
    b_coef: float, c_coef: float, coeffs: tuple[float, float, float]
) -> CrossoverVerdict:
    """Nonnegativity set of B a + C on a >= 0 (the A = 0 case)."""
    if b_coef > 0.0:
        if c_coef >= 0.0:
            return CrossoverVerdict(VerdictKind.NCR_ALWAYS_WINS, coeffs=coeffs)
        return CrossoverVerdict(
            VerdictKind.THRESHOLD, alpha_min=-c_coef / b_coef, coeffs=coeffs
        )
    if b_coef < 0.0:
        if c_coef < 0.0:
            return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS, coeffs=coeffs)
        return CrossoverVerdict(
            VerdictKind.INTERVAL,
            alpha_min=0.0,
            alpha_max=-c_coef / b_coef,
            coeffs=coeffs,
        )
    if c_coef >= 0.0:
        return CrossoverVerdict(VerdictKind.NCR_ALWAYS_WINS, coeffs=coeffs)
    return CrossoverVerdict(VerdictKind.RIS_ALWAYS_WINS, coeffs=coeffs)
