"""Oracle suite behind the CLI `validate` subcommand.

Re-derives a battery of closed-form results by brute force (dense matrix
inversion, symbol-level simulation, Monte Carlo averaging, grid search,
bisection) and checks agreement at fixed tolerances. All randomness is
derived from one seed, so a given seed reproduces the exact same report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Scatterer, UlaGeometry, scatterer_correlation
from .crossover import (
    VerdictKind,
    required_alpha_vs_active,
    required_alpha_vs_passive,
)
from .optimize import optimal_alpha_active, optimal_alpha_ncr
from .oracle import (
    bisect_root,
    dense_mmse_snr,
    grid_search_alpha,
    jensen_counterexample_search,
    mc_wideband_average,
    random_instance,
    simulate_link_snr,
)
from .params import ChannelGains, Deployment3D, DirectCoupling, SystemParams
from .snr import (
    avg_snr_active_ris,
    avg_snr_ncr,
    avg_snr_passive_ris,
    ncr_direct_coeffs,
    snr_active_ris,
    snr_active_ris_direct,
    snr_ncr,
    snr_ncr_direct,
    snr_passive_ris,
)

__all__ = ["Check", "run_all_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _random_setup(rng):
    p = SystemParams(
        power_w=10 ** rng.uniform(-2.0, 0.5),
        noise_w=10 ** rng.uniform(-15.0, -11.0),
        num_bs_antennas=int(rng.choice([2, 4, 8, 16])),
        num_ris_elements=int(rng.choice([1, 2, 4, 8])),
    )
    g = ChannelGains(
        beta1=10 ** rng.uniform(-10.0, -6.0),
        beta2=10 ** rng.uniform(-11.0, -7.0),
        beta3=10 ** rng.uniform(-13.0, -9.0),
    )
    return p, g


def check_dense_identity(seed: int, draws: int = 200) -> Check:
    """Closed forms with a direct path against explicit matrix inversion."""
    rng = _rng(seed)
    worst = 0.0
    for _ in range(draws):
        p, g = _random_setup(rng)
        inst = random_instance(g, p.num_bs_antennas, p.num_ris_elements, rng)
        alpha = 10 ** rng.uniform(-1.0, 2.0)
        coupling = inst.coupling()
        h3p = inst.direct_channel_power()
        ncr_cf = snr_ncr_direct(p, g, coupling, h3p, alpha).linear
        ncr_or = dense_mmse_snr(inst, p, alpha, variant="ncr").linear
        act_cf = snr_active_ris_direct(p, g, coupling.magnitude, h3p, alpha).linear
        act_or = dense_mmse_snr(inst, p, alpha, variant="active").linear
        worst = max(
            worst,
            abs(ncr_cf - ncr_or) / ncr_or,
            abs(act_cf - act_or) / act_or,
        )
    return Check(
        "dense-mmse-identity",
        worst <= 1e-9,
        f"max relative error {worst:.2e} over {draws} draws (tolerance 1e-9)",
    )


def check_signal_simulation(seed: int, sets: int = 3, num_symbols: int = 10**6) -> Check:
    """Symbol-level simulation against the no-direct closed forms."""
    rng = _rng(seed)
    worst_db = 0.0
    for index in range(sets):
        p, g = _random_setup(rng)
        g = ChannelGains(g.beta1, g.beta2, 0.0)
        inst = random_instance(g, p.num_bs_antennas, p.num_ris_elements, rng)
        alpha = 10 ** rng.uniform(0.0, 2.0)
        pairs = [
            ("passive", 1.0, snr_passive_ris(p, g)),
            ("active", alpha, snr_active_ris(p, g, alpha)),
            ("ncr", alpha, snr_ncr(p, g, alpha)),
        ]
        for variant, amp, expected in pairs:
            measured = simulate_link_snr(
                inst, p, amp, num_symbols, seed + 1000 + index, variant=variant
            )
            worst_db = max(worst_db, abs(measured.db - expected.db))
    return Check(
        "signal-simulation",
        worst_db <= 0.1,
        f"max |error| {worst_db:.4f} dB over {sets} parameter sets (tolerance 0.1 dB)",
    )


def check_threshold_bisection(seed: int, draws: int = 200) -> Check:
    """Closed-form crossover thresholds against bisection roots."""
    rng = _rng(seed)
    worst = 0.0
    count = 0
    for _ in range(draws):
        p, g = _random_setup(rng)
        verdict = required_alpha_vs_passive(p, g)
        if verdict.kind is VerdictKind.THRESHOLD:
            ref = snr_passive_ris(p, g).linear
            root = bisect_root(
                lambda a: snr_ncr(p, g, a).linear - ref,
                1e-9,
                verdict.alpha_min * 10.0 + 1.0,
            )
            worst = max(worst, abs(root - verdict.alpha_min) / verdict.alpha_min)
            count += 1
        aris_alpha = 10 ** rng.uniform(0.0, 1.5)
        verdict = required_alpha_vs_active(p, g, aris_alpha)
        if verdict.kind is VerdictKind.THRESHOLD:
            ref = snr_active_ris(p, g, aris_alpha).linear
            root = bisect_root(
                lambda a: snr_ncr(p, g, a).linear - ref,
                1e-9,
                verdict.alpha_min * 10.0 + 1.0,
            )
            worst = max(worst, abs(root - verdict.alpha_min) / verdict.alpha_min)
            count += 1
    return Check(
        "threshold-bisection",
        worst <= 1e-6 and count > 0,
        f"max relative error {worst:.2e} over {count} thresholds (tolerance 1e-6)",
    )


def check_gain_optimizers(seed: int) -> Check:
    """Analytic optimal gains against grid search."""
    p = SystemParams(power_w=1.0, noise_w=1.0, num_bs_antennas=4, num_ris_elements=2)
    g = ChannelGains(beta1=1.0, beta2=0.01)
    problems = []

    solution = optimal_alpha_active(p, g, coupling_mag=1.0, alpha_max=20.0)
    if abs(solution.alpha - 10.0) > 1e-9:
        problems.append(f"active interior gain {solution.alpha} != 10")

    def active_curve(alphas):
        num = (0.14 * alphas + 0.4) * alphas
        return num / (1.0 + 0.08 * alphas**2)

    best_alpha, best_value = grid_search_alpha(active_curve, 20.0, 10**5)
    if best_value > solution.snr.linear * (1.0 + 1e-9):
        problems.append("grid search beat the analytic active optimum")

    coupling = DirectCoupling(1.0, math.pi)  # destructive: real part -1
    for cap, expected in ((5.0, 0.0), (10.0, 10.0)):
        solution = optimal_alpha_ncr(p, g, coupling, cap)
        if abs(solution.alpha - expected) > 1e-12:
            problems.append(f"ncr boundary gain {solution.alpha} != {expected} at cap {cap}")
        a_coef, b_coef, c_coef = ncr_direct_coeffs(p, g, coupling)

        def ncr_curve(alphas):
            return (a_coef * alphas**2 + b_coef * alphas) / (
                p.noise_w + c_coef * alphas**2
            )

        grid_alpha, _ = grid_search_alpha(ncr_curve, cap, 10**5)
        if abs(grid_alpha - expected) > cap / 10**4:
            problems.append(f"grid search disagrees at cap {cap}: {grid_alpha}")
    detail = "; ".join(problems) if problems else "interior and boundary optima confirmed"
    return Check("gain-optimizers", not problems, detail)


def check_jensen(seed: int, trials: int = 200) -> Check:
    """No unequal-amplitude configuration beats the equal-amplitude optimum."""
    p = SystemParams(power_w=0.1, noise_w=1e-13, num_bs_antennas=8, num_ris_elements=4)
    g = ChannelGains(beta1=1e-7, beta2=1e-8)
    report = jensen_counterexample_search(
        p, g, coupling_mag=math.sqrt(8 * 1e-9), alpha_max=30.0, trials=trials, seed=seed
    )
    return Check(
        "equal-amplitude-optimality",
        not report.found_counterexample(),
        f"max relative excess {report.max_excess_rel:.2e} over {trials} trials",
    )


def check_wideband(seed: int, num_draws: int = 20_000) -> Check:
    """Wideband average closed forms against Monte Carlo."""
    dep = Deployment3D((0.0, 0.0, 10.0), (1000.0, 0.0, 0.0), (500.0, 10.0, 10.0))
    scatterers = [
        Scatterer((1000.0, 5.0, 0.0)),
        Scatterer((1000.0, -5.0, 0.0)),
        Scatterer((990.0, 5.0, 0.0)),
        Scatterer((990.0, -5.0, 0.0)),
    ]
    p = SystemParams(power_w=0.1, noise_w=2e-15, num_bs_antennas=64, num_ris_elements=16)
    g = ChannelGains(beta1=2e-9, beta2=3e-10, beta3=1e-12)
    array = UlaGeometry()
    corr = scatterer_correlation(dep, scatterers, g.beta3, p.num_bs_antennas, array)
    bs_rx = array.response_toward(p.num_bs_antennas, dep.bs_pos, dep.node_pos)
    quad = corr.quad_form(bs_rx)
    alpha = 100.0
    problems = []
    for variant, expected in (
        ("passive", avg_snr_passive_ris(p, g)),
        ("active", avg_snr_active_ris(p, g, alpha, quad)),
        ("ncr", avg_snr_ncr(p, g, alpha, quad)),
    ):
        mc = mc_wideband_average(p, g, corr, bs_rx, alpha, variant, num_draws, seed)
        gap = abs(mc.snr.linear - expected.linear)
        if gap > 3.0 * mc.stderr_linear:
            problems.append(f"{variant}: gap {gap:.3e} vs stderr {mc.stderr_linear:.3e}")
    detail = "; ".join(problems) if problems else (
        f"all three averages within 3 standard errors at {num_draws} draws"
    )
    return Check("wideband-average", not problems, detail)


def run_all_checks(seed: int = 2024) -> list[Check]:
    """Run the whole battery with sub-seeds derived from `seed`."""
    return [
        check_dense_identity(seed),
        check_signal_simulation(seed + 1),
        check_threshold_bisection(seed + 2),
        check_gain_optimizers(seed + 3),
        check_jensen(seed + 4),
        check_wideband(seed + 5),
    ]
