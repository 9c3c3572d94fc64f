"""Brute-force, explicit-vector validation of the closed forms.

Everything here recomputes SNRs from first principles: dense matrix
inversion for the MMSE quadratic forms, symbol-level signal simulation,
Monte Carlo averaging over random direct channels, plain grid search for
the gain optimizers, and a random search for counterexamples to the
equal-amplitude optimality of the active RIS.

Randomness is reproducible by construction: every function takes a 64-bit
seed and uses numpy's PCG64 generator; Gaussian variates are produced by an
explicit Box-Muller transform of PCG64 uniforms, so identical seeds give
bit-identical results on a given platform. Monte Carlo loops may be
partitioned across workers with per-worker derived seeds and merged by
weighted averaging; the implementation here is sequential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import CorrelationMatrix
from .params import ChannelGains, DirectCoupling, SystemParams
from .snr import SnrResult

__all__ = [
    "ExplicitChannelInstance",
    "random_instance",
    "complex_normal",
    "dense_mmse_snr",
    "simulate_link_snr",
    "mc_wideband_average",
    "McAverage",
    "grid_search_alpha",
    "jensen_counterexample_search",
    "JensenReport",
    "bisect_root",
]

# Fixed Monte Carlo chunk so the draw order, and hence the result for a
# given seed, does not depend on the requested sample count.
_CHUNK = 5_000


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian draws via Box-Muller.

    Built from two uniform streams so the mapping from the generator's bit
    stream to variates is an explicit deterministic transform: the squared
    magnitude is exponential, the phase uniform.
    """
    radius2 = -np.log1p(-rng.random(shape))  # Exp(1)
    phase = 2.0 * np.pi * rng.random(shape)
    return np.sqrt(variance * radius2) * np.exp(1j * phase)


def _unit_modulus(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(size))


@dataclass(frozen=True)
class ExplicitChannelInstance:
    """Explicit vectors realizing one channel instance.

    ris_rx_response: unit-modulus response at the RIS from the UE (length N).
    bs_rx_response: unit-modulus response at the BS from the node (length M).
    ris_tx_response: unit-modulus response at the RIS toward the BS (length N).
    direct_channel: BS-UE channel vector (length M, zeros when blocked).
    ue_node_phase: phase of the scalar UE-NCR channel.

    The RIS channels are sqrt(beta1) * ris_rx_response and
    sqrt(beta2) * outer(bs_rx_response, ris_tx_response); the NCR channels
    are sqrt(beta1) e^{j ue_node_phase} and sqrt(beta2) * bs_rx_response.
    """

    beta1: float
    beta2: float
    ris_rx_response: np.ndarray
    bs_rx_response: np.ndarray
    ris_tx_response: np.ndarray
    direct_channel: np.ndarray
    ue_node_phase: float = 0.0

    @property
    def num_bs_antennas(self) -> int:
        return len(self.bs_rx_response)

    @property
    def num_ris_elements(self) -> int:
        return len(self.ris_rx_response)

    def coupling(self) -> DirectCoupling:
        """Coupling between the direct channel and the cascaded direction."""
        raw = complex(self.direct_channel.conj() @ self.bs_rx_response)
        return DirectCoupling.from_complex(raw * np.exp(1j * self.ue_node_phase))

    def direct_channel_power(self) -> float:
        return float(np.real(self.direct_channel.conj() @ self.direct_channel))


def random_instance(
    g: ChannelGains,
    num_bs_antennas: int,
    num_ris_elements: int,
    rng: np.random.Generator,
    direct_channel_power: float | None = None,
) -> ExplicitChannelInstance:
    """Instance with i.i.d. unit-modulus responses and, unless the direct
    path is disabled, an isotropic Gaussian direct channel whose expected
    squared norm is `direct_channel_power` (default M * beta3)."""
    if direct_channel_power is None:
        direct_channel_power = num_bs_antennas * g.beta3
    if direct_channel_power > 0.0:
        h3 = complex_normal(
            rng, num_bs_antennas, direct_channel_power / num_bs_antennas
        )
    else:
        h3 = np.zeros(num_bs_antennas, dtype=complex)
    return ExplicitChannelInstance(
        beta1=g.beta1,
        beta2=g.beta2,
        ris_rx_response=_unit_modulus(rng, num_ris_elements),
        bs_rx_response=_unit_modulus(rng, num_bs_antennas),
        ris_tx_response=_unit_modulus(rng, num_ris_elements),
        direct_channel=h3,
        ue_node_phase=float(2.0 * np.pi * rng.random() - np.pi),
    )


def _ris_phases(inst: ExplicitChannelInstance) -> np.ndarray:
    """SNR-maximizing RIS phase configuration: align every reflected
    component and, when a direct path exists, also its phase."""
    phases = -np.angle(inst.ris_rx_response) - np.angle(inst.ris_tx_response)
    raw = complex(inst.direct_channel.conj() @ inst.bs_rx_response)
    if raw != 0:
        phases = phases - np.angle(raw)
    return np.exp(1j * phases)


def _effective_vectors(
    inst: ExplicitChannelInstance, variant: str, amplitudes
) -> tuple[np.ndarray, np.ndarray]:
    """Useful-signal vector (per unit transmitted amplitude) and the matrix
    mapping node noise to the BS, for one technology variant."""
    m = inst.num_bs_antennas
    if variant == "passive":
        psi = _ris_phases(inst)
        ris_matrix = math.sqrt(inst.beta2) * np.outer(
            inst.bs_rx_response, inst.ris_tx_response * psi
        )
        signal = ris_matrix @ (math.sqrt(inst.beta1) * inst.ris_rx_response)
        return signal + inst.direct_channel, np.zeros((m, 0))
    if variant == "active":
        amps = np.broadcast_to(
            np.asarray(amplitudes, dtype=float), (inst.num_ris_elements,)
        )
        if np.any(amps < 0.0):
            raise ValueError("active-RIS amplitudes must be >= 0")
        psi = amps * _ris_phases(inst)
        noise_map = math.sqrt(inst.beta2) * np.outer(
            inst.bs_rx_response, inst.ris_tx_response * psi
        )
        signal = noise_map @ (math.sqrt(inst.beta1) * inst.ris_rx_response)
        return signal + inst.direct_channel, noise_map
    if variant == "ncr":
        alpha = float(amplitudes)
        if alpha < 0.0:
            raise ValueError("NCR gain must be >= 0")
        node_channel = math.sqrt(inst.beta2) * inst.bs_rx_response
        ue_scalar = math.sqrt(inst.beta1) * np.exp(1j * inst.ue_node_phase)
        signal = alpha * ue_scalar * node_channel + inst.direct_channel
        return signal, alpha * node_channel[:, None]
    raise ValueError(f"unknown variant {variant!r}")


def dense_mmse_snr(
    inst: ExplicitChannelInstance,
    p: SystemParams,
    amplitudes,
    variant: str = "active",
) -> SnrResult:
    """SNR of the optimal linear receiver, by explicit matrix inversion.

    Builds the full noise covariance (amplified node noise plus white BS
    noise) and evaluates P s^H C^{-1} s directly; no rank-one shortcut is
    taken anywhere, which makes this the independent check of the closed
    forms. Intended for desk-scale M.
    """
    if p.noise_w <= 0.0:
        raise ValueError("noise power must be positive for the MMSE receiver")
    signal, noise_map = _effective_vectors(inst, variant, amplitudes)
    m = inst.num_bs_antennas
    cov = p.noise_w * (noise_map @ noise_map.conj().T) + p.noise_w * np.eye(m)
    value = p.power_w * float(np.real(signal.conj() @ np.linalg.inv(cov) @ signal))
    return SnrResult(max(value, 0.0))


def simulate_link_snr(
    inst: ExplicitChannelInstance,
    p: SystemParams,
    amplitudes,
    num_symbols: int,
    seed: int,
    variant: str = "ncr",
) -> SnrResult:
    """Empirical SNR from a symbol-level simulation of the signal model.

    Draws unit-power symbols and Gaussian receiver noises, applies MR
    combining (or MMSE when a direct path is present), and estimates the
    SNR as mean combined signal power over mean combined noise power.
    """
    if num_symbols < 1:
        raise ValueError("need at least one symbol")
    signal, noise_map = _effective_vectors(inst, variant, amplitudes)
    m = inst.num_bs_antennas
    if inst.direct_channel_power() > 0.0:
        cov = p.noise_w * (noise_map @ noise_map.conj().T) + p.noise_w * np.eye(m)
        combiner = np.linalg.solve(cov, signal)
    elif variant == "passive":
        combiner = signal
    else:
        combiner = inst.bs_rx_response

    sig_coef = math.sqrt(p.power_w) * complex(combiner.conj() @ signal)
    node_row = combiner.conj() @ noise_map  # node noise -> combined output
    bs_norm = float(np.real(combiner.conj() @ combiner))

    rng = _rng(seed)
    sig_power = 0.0
    noise_power = 0.0
    done = 0
    while done < num_symbols:
        count = min(_CHUNK, num_symbols - done)
        symbols = np.exp(2j * np.pi * rng.random(count))
        node_noise = complex_normal(rng, (count, noise_map.shape[1]), p.noise_w)
        bs_noise = complex_normal(rng, (count, m), p.noise_w)
        combined_noise = node_noise @ node_row + bs_noise @ combiner.conj()
        sig_power += float(np.sum(np.abs(sig_coef * symbols) ** 2))
        noise_power += float(np.sum(np.abs(combined_noise) ** 2))
        done += count
    if noise_power == 0.0:
        raise ValueError("all-zero noise after combining; cannot form an SNR")
    return SnrResult(
        sig_power / noise_power,
        breakdown={"num_symbols": float(num_symbols), "bs_combiner_norm2": bs_norm},
    )


@dataclass(frozen=True)
class McAverage:
    """Monte Carlo mean SNR with its standard error."""

    snr: SnrResult
    stderr_linear: float
    num_draws: int


def _sqrt_factor(corr: CorrelationMatrix) -> np.ndarray:
    """Square-root factor B with B B^H = R from the eigendecomposition,
    with numerically-zero eigenvalues dropped (scatterer-built correlations
    are rank-deficient by construction)."""
    corr.validate()
    eigvals, eigvecs = np.linalg.eigh(corr.matrix)
    eigvals = np.clip(eigvals, 0.0, None)
    keep = eigvals > eigvals.max() * 1e-14 if eigvals.max() > 0.0 else eigvals > -1.0
    return eigvecs[:, keep] * np.sqrt(eigvals[keep])


def mc_wideband_average(
    p: SystemParams,
    g: ChannelGains,
    corr: CorrelationMatrix,
    bs_rx_response: np.ndarray,
    alpha: float,
    variant: str,
    num_draws: int,
    seed: int,
) -> McAverage:
    """Average SNR over direct channels drawn from the given correlation.

    Each draw evaluates the per-realization SNR of the chosen variant with
    the drawn direct channel and a uniformly random cascaded phase (the
    per-subcarrier misalignment), then the sample mean and its standard
    error are returned.
    """
    if num_draws < 2:
        raise ValueError("need at least two draws for a standard error")
    factor = _sqrt_factor(corr)
    a21 = np.asarray(bs_rx_response, dtype=complex)
    m, n = p.num_bs_antennas, p.num_ris_elements
    sq = math.sqrt(g.beta1 * g.beta2)

    rng = _rng(seed)
    values = np.empty(num_draws)
    done = 0
    while done < num_draws:
        count = min(_CHUNK, num_draws - done)
        latent = complex_normal(rng, (count, factor.shape[1]))
        phase = np.exp(1j * (2.0 * np.pi * rng.random(count) - np.pi))
        h3 = latent @ factor.T
        h3_power = np.sum(np.abs(h3) ** 2, axis=1)
        coupling = (h3.conj() @ a21) * phase
        mag2 = np.abs(coupling) ** 2
        re = coupling.real
        a2 = alpha * alpha
        if variant == "passive":
            value = (
                p.power_w
                * (h3_power + g.beta1 * g.beta2 * n * n * m + 2.0 * sq * n * re)
                / p.noise_w
            )
        elif variant == "active":
            num = (
                p.power_w * a2 * m * g.beta1 * g.beta2 * n * n
                - p.power_w * a2 * g.beta2 * n * mag2
                + 2.0 * p.power_w * alpha * n * sq * re
            )
            value = num / (p.noise_w * (1.0 + a2 * g.beta2 * m * n)) + (
                p.power_w * h3_power / p.noise_w
            )
        elif variant == "ncr":
            num = (
                p.power_w * a2 * m * g.beta1 * g.beta2
                - p.power_w * a2 * g.beta2 * mag2
                + 2.0 * p.power_w * alpha * sq * re
            )
            value = num / (p.noise_w * (1.0 + a2 * g.beta2 * m)) + (
                p.power_w * h3_power / p.noise_w
            )
        else:
            raise ValueError(f"unknown variant {variant!r}")
        values[done : done + count] = value
        done += count

    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(num_draws))
    return McAverage(SnrResult(max(mean, 0.0)), stderr, num_draws)


def grid_search_alpha(objective, alpha_max: float, num_points: int):
    """Maximize a vectorized objective over a uniform gain grid on
    [0, alpha_max], both endpoints included. Returns (best_alpha, value)."""
    if num_points < 2:
        raise ValueError("need at least two grid points")
    if not alpha_max > 0.0:
        raise ValueError("alpha_max must be > 0")
    grid = np.linspace(0.0, alpha_max, num_points)
    values = np.asarray(objective(grid), dtype=float)
    if values.shape != grid.shape:
        raise ValueError("objective must map the grid to equally many values")
    best = int(np.argmax(values))
    return float(grid[best]), float(values[best])


@dataclass(frozen=True)
class JensenReport:
    """Outcome of a random search for unequal-amplitude configurations that
    beat the equal-amplitude active-RIS optimum."""

    trials: int
    equal_amplitude_snr: float
    max_excess_rel: float
    num_exceedances: int

    def found_counterexample(self, rel_tol: float = 1e-10) -> bool:
        return self.max_excess_rel > rel_tol


def jensen_counterexample_search(
    p: SystemParams,
    g: ChannelGains,
    coupling_mag: float,
    alpha_max: float,
    trials: int,
    seed: int,
) -> JensenReport:
    """Search random per-element amplitude vectors (within the cap) for one
    that beats the equal-amplitude optimum of the active RIS.

    The direct channel is constructed so its coupling to the cascaded
    direction has the requested magnitude. The expected outcome is that no
    trial exceeds the optimum beyond numerical noise.
    """
    from .optimize import optimal_alpha_active

    rng = _rng(seed)
    m, n = p.num_bs_antennas, p.num_ris_elements
    a21 = _unit_modulus(rng, m)
    h3 = (coupling_mag / m) * a21 if coupling_mag > 0.0 else np.zeros(m, dtype=complex)
    inst = ExplicitChannelInstance(
        beta1=g.beta1,
        beta2=g.beta2,
        ris_rx_response=_unit_modulus(rng, n),
        bs_rx_response=a21,
        ris_tx_response=_unit_modulus(rng, n),
        direct_channel=h3,
    )
    best = optimal_alpha_active(
        p, g, coupling_mag, alpha_max, inst.direct_channel_power()
    )
    reference = best.snr.linear

    max_excess = -math.inf
    exceed = 0
    for _ in range(trials):
        amplitudes = alpha_max * rng.random(n)
        value = dense_mmse_snr(inst, p, amplitudes, variant="active").linear
        excess = (value - reference) / reference if reference > 0.0 else value
        max_excess = max(max_excess, excess)
        if excess > 1e-10:
            exceed += 1
    return JensenReport(trials, reference, max_excess, exceed)


def bisect_root(func, lo: float, hi: float, xtol: float = 1e-12, rtol: float = 1e-12):
    """Root of a scalar function on [lo, hi] by Brent's method; the bracket
    must change sign. Used as the independent check of closed-form
    crossover thresholds."""
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("bracket does not change sign")
    return float(brentq(func, lo, hi, xtol=xtol, rtol=rtol))
