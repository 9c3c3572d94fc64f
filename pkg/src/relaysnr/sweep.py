"""Sweep execution: turn a Scenario into a table of per-axis-value results.

Each row recomputes the link gains from the geometry or path-loss models,
applies the gain optimizers under the effective amplitude cap (the minimum
of any per-curve cap, global cap, and the cap implied by a radiated-power
limit), and evaluates every curve. Rows are independent, so they could be
computed in parallel; they are evaluated sequentially here and ordered by
axis value either way.

Infeasible required-gain cells (the RIS wins for every gain) carry the
sentinel `inf`, never an omission. A row that fails outright (degenerate
geometry at some axis value) reports its message in the trailing `error`
column and the run continues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import (
    CorrelationMatrix,
    UlaGeometry,
    free_space_gain,
    scatterer_correlation,
    umi_street_canyon_gain,
)
from .crossover import (
    CrossoverVerdict,
    required_alpha_vs_active,
    required_alpha_vs_active_direct,
    required_alpha_vs_passive,
    required_alpha_vs_passive_direct,
    required_alpha_wideband,
)
from .optimize import (
    GainCase,
    GainSolution,
    optimal_alpha_active,
    optimal_alpha_active_wideband,
    optimal_alpha_ncr,
    optimal_alpha_ncr_wideband,
)
from .params import ChannelGains, Deployment3D, DirectCoupling, SystemParams, distances
from .scenario import CurveSpec, Scenario
from .snr import (
    SnrResult,
    avg_snr_active_ris,
    avg_snr_ncr,
    avg_snr_passive_ris,
    snr_active_ris,
    snr_active_ris_direct,
    snr_ncr,
    snr_ncr_direct,
    snr_passive_ris,
    snr_passive_ris_direct,
)

__all__ = ["SweepTable", "run_sweep", "evaluate_curves", "emit_csv"]

_AXIS_UNITS = {
    "d1": "m",
    "d2": "m",
    "d3": "m",
    "node_x": "m",
    "bs_antennas": "count",
    "mismatch_deg": "deg",
}


@dataclass(frozen=True)
class SweepTable:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass(frozen=True)
class RowContext:
    """Everything a curve evaluation needs at one axis value."""

    num_bs_antennas: int
    gains: ChannelGains
    coupling: DirectCoupling | None  # narrowband direct path
    direct_channel_power: float
    coupling_power: float | None  # wideband quadratic form
    wideband: bool


class _CorrelationCache:
    """Correlation matrices keyed by (M, beta3); the scatterer set and BS
    position are fixed within one scenario."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.array = UlaGeometry()
        self._store: dict[tuple, CorrelationMatrix] = {}

    def get(self, num_antennas: int, beta3: float) -> CorrelationMatrix:
        key = (num_antennas, beta3)
        if key not in self._store:
            sc = self.scenario
            dep = Deployment3D(sc.bs_pos, sc.ue_pos, sc.node_pos)
            self._store[key] = scatterer_correlation(
                dep, sc.scatterers, beta3, num_antennas, self.array
            )
        return self._store[key]


def _link_gain(scenario: Scenario, link: str, distance: float | None) -> float:
    model = scenario.links[link]
    if model.kind == "off":
        return 0.0
    if model.kind == "fixed_db":
        return model.gain_linear
    if distance is None:
        raise ValueError(f"link {link!r} needs a distance but none is available")
    if model.kind == "free_space":
        return free_space_gain(distance, scenario.wavelength_m)
    return umi_street_canyon_gain(distance, scenario.carrier_ghz)


def _row_context(
    scenario: Scenario, axis: str | None, value: float | None, cache: _CorrelationCache
) -> RowContext:
    num_bs = scenario.bs_antennas
    mismatch_deg = scenario.mismatch_deg
    node_pos = scenario.node_pos
    if axis == "bs_antennas":
        num_bs = int(value)
    elif axis == "mismatch_deg":
        mismatch_deg = value
    elif axis == "node_x":
        node_pos = (value, node_pos[1], node_pos[2])

    dist = {"d1": scenario.d1, "d2": scenario.d2, "d3": scenario.d3}
    if scenario.bs_pos is not None:
        dep = Deployment3D(scenario.bs_pos, scenario.ue_pos, node_pos)
        geo = dict(zip(("d1", "d2", "d3"), distances(dep)))
        if axis == "node_x":
            # The axis moves the node, so geometry wins over explicit values.
            dist.update(geo)
        else:
            for name, geo_value in geo.items():
                if dist[name] is None:
                    dist[name] = geo_value
    if axis in ("d1", "d2", "d3"):
        dist[axis] = value

    gains = ChannelGains(
        beta1=_link_gain(scenario, "ue_node", dist["d1"]),
        beta2=_link_gain(scenario, "node_bs", dist["d2"]),
        beta3=_link_gain(scenario, "ue_bs", dist["d3"]),
    )

    if scenario.wideband:
        corr = cache.get(num_bs, gains.beta3)
        bs_rx = cache.array.response_toward(num_bs, scenario.bs_pos, node_pos)
        return RowContext(
            num_bs_antennas=num_bs,
            gains=gains,
            coupling=None,
            direct_channel_power=num_bs * gains.beta3,
            coupling_power=corr.quad_form(bs_rx),
            wideband=True,
        )

    if scenario.has_direct:
        direct_power = num_bs * gains.beta3
        coupling = DirectCoupling(
            scenario.alignment * math.sqrt(direct_power),
            math.radians(mismatch_deg),
        )
        return RowContext(num_bs, gains, coupling, direct_power, None, False)

    return RowContext(num_bs, gains, None, 0.0, None, False)


def _system_params(scenario: Scenario, ctx: RowContext, num_ris: int) -> SystemParams:
    return SystemParams(
        power_w=scenario.power_w,
        noise_w=scenario.noise_w,
        num_bs_antennas=ctx.num_bs_antennas,
        num_ris_elements=num_ris,
        ncr_alpha_max=scenario.ncr_alpha_max or 0.0,
        aris_alpha_max=scenario.aris_alpha_max or 0.0,
    )


def _effective_cap(
    scenario: Scenario, curve_cap: float | None, variant: str, num_ris: int,
    gains: ChannelGains,
) -> float:
    """Minimum of the explicit amplitude caps and the cap implied by the
    radiated-power limit; inf when unconstrained."""
    caps = []
    if curve_cap is not None:
        caps.append(curve_cap)
    global_cap = (
        scenario.ncr_alpha_max if variant == "ncr" else scenario.aris_alpha_max
    )
    if global_cap is not None:
        caps.append(global_cap)
    if scenario.radiated_power_max_w is not None:
        # Amplified signal-plus-noise power at the device output: per device
        # for the NCR, per element (N branches) for the active RIS.
        branch_input = scenario.power_w * gains.beta1 + scenario.noise_w
        branches = num_ris if variant == "active_ris" else 1
        caps.append(math.sqrt(scenario.radiated_power_max_w / (branches * branch_input)))
    return min(caps) if caps else math.inf


@dataclass(frozen=True)
class CurveResult:
    """Evaluation of one curve at one axis value."""

    label: str
    snr: SnrResult | None = None
    alpha: float | None = None
    case: GainCase | None = None
    verdict: CrossoverVerdict | None = None


def _evaluate_snr_curve(
    scenario: Scenario, ctx: RowContext, curve: CurveSpec
) -> CurveResult:
    num_ris = curve.ris_elements or scenario.ris_elements
    p = _system_params(scenario, ctx, num_ris)
    g = ctx.gains

    if curve.variant == "direct_only":
        return CurveResult(
            curve.label,
            snr=SnrResult(p.power_w * ctx.num_bs_antennas * g.beta3 / p.noise_w),
        )

    if curve.variant == "passive_ris":
        if ctx.wideband:
            snr = avg_snr_passive_ris(p, g)
        elif ctx.coupling is not None:
            snr = snr_passive_ris_direct(
                p, g, ctx.coupling.magnitude, ctx.direct_channel_power
            )
        else:
            snr = snr_passive_ris(p, g)
        return CurveResult(curve.label, snr=snr)

    cap = _effective_cap(scenario, curve.alpha_max, curve.variant, num_ris, g)
    if curve.alpha is not None:
        alpha = min(curve.alpha, cap)
        solution = None
    else:
        solution = _optimize(p, g, ctx, curve.variant, cap)
        alpha = solution.alpha

    if curve.variant == "active_ris":
        if ctx.wideband:
            snr = avg_snr_active_ris(p, g, alpha, ctx.coupling_power)
        elif ctx.coupling is not None:
            snr = snr_active_ris_direct(
                p, g, ctx.coupling.magnitude, ctx.direct_channel_power, alpha
            )
        else:
            snr = snr_active_ris(p, g, alpha)
    else:  # ncr
        if ctx.wideband:
            snr = avg_snr_ncr(p, g, alpha, ctx.coupling_power)
        elif ctx.coupling is not None:
            snr = snr_ncr_direct(
                p, g, ctx.coupling, ctx.direct_channel_power, alpha
            )
        else:
            snr = snr_ncr(p, g, alpha)
    return CurveResult(
        curve.label,
        snr=snr,
        alpha=alpha,
        case=solution.case if solution is not None else None,
    )


def _optimize(
    p: SystemParams, g: ChannelGains, ctx: RowContext, variant: str, cap: float
) -> GainSolution:
    if not math.isfinite(cap):
        raise ValueError("cannot optimize an amplification gain without a cap")
    if variant == "active_ris":
        if ctx.wideband:
            return optimal_alpha_active_wideband(p, g, ctx.coupling_power, cap)
        mag = ctx.coupling.magnitude if ctx.coupling is not None else 0.0
        return optimal_alpha_active(p, g, mag, cap, ctx.direct_channel_power)
    if ctx.wideband:
        return optimal_alpha_ncr_wideband(p, g, ctx.coupling_power, cap)
    coupling = ctx.coupling if ctx.coupling is not None else DirectCoupling(0.0)
    return optimal_alpha_ncr(p, g, coupling, cap, ctx.direct_channel_power)


def _evaluate_required_curve(
    scenario: Scenario, ctx: RowContext, curve: CurveSpec
) -> CurveResult:
    num_ris = curve.ref_ris_elements or curve.ris_elements or scenario.ris_elements
    p = _system_params(scenario, ctx, num_ris)
    g = ctx.gains

    if curve.versus == "passive_ris":
        if ctx.wideband:
            verdict = required_alpha_wideband(p, g, ctx.coupling_power, "passive")
        elif ctx.coupling is not None:
            verdict = required_alpha_vs_passive_direct(p, g, ctx.coupling)
        else:
            verdict = required_alpha_vs_passive(p, g)
        return CurveResult(curve.label, verdict=verdict)

    if curve.ref_alpha is not None:
        aris_alpha = curve.ref_alpha
    elif ctx.wideband:
        aris_alpha = optimal_alpha_active_wideband(
            p, g, ctx.coupling_power, curve.ref_alpha_max
        ).alpha
    elif ctx.coupling is not None:
        aris_alpha = optimal_alpha_active(
            p, g, ctx.coupling.magnitude, curve.ref_alpha_max, ctx.direct_channel_power
        ).alpha
    else:
        aris_alpha = curve.ref_alpha_max
    if ctx.wideband:
        verdict = required_alpha_wideband(
            p, g, ctx.coupling_power, "active", aris_alpha
        )
    elif ctx.coupling is not None:
        verdict = required_alpha_vs_active_direct(p, g, ctx.coupling, aris_alpha)
    else:
        verdict = required_alpha_vs_active(p, g, aris_alpha)
    return CurveResult(curve.label, verdict=verdict, alpha=aris_alpha)


def evaluate_curves(
    scenario: Scenario, axis_value: float | None = None, cache=None
) -> list[CurveResult]:
    """Evaluate every curve at one axis value (or at the nominal operating
    point when axis_value is None)."""
    if cache is None:
        cache = _CorrelationCache(scenario)
    axis = scenario.sweep.axis if scenario.sweep and axis_value is not None else None
    ctx = _row_context(scenario, axis, axis_value, cache)
    if scenario.mode == "snr":
        return [_evaluate_snr_curve(scenario, ctx, c) for c in scenario.curves]
    return [_evaluate_required_curve(scenario, ctx, c) for c in scenario.curves]


def _columns(scenario: Scenario) -> list[str]:
    axis = scenario.sweep.axis
    cols = [f"{axis} ({_AXIS_UNITS[axis]})"]
    for curve in scenario.curves:
        if scenario.mode == "snr":
            cols.append(f"{curve.label}_snr (dB)")
            if curve.variant in ("ncr", "active_ris"):
                cols.append(f"{curve.label}_alpha (linear)")
        else:
            cols.append(f"{curve.label}_alpha_min (linear)")
            cols.append(f"{curve.label}_alpha_max (linear)")
            cols.append(f"{curve.label}_verdict")
    cols.append("error")
    return cols


def _result_cells(scenario: Scenario, result: CurveResult) -> list:
    if scenario.mode == "snr":
        cells = [result.snr.db]
        curve = next(c for c in scenario.curves if c.label == result.label)
        if curve.variant in ("ncr", "active_ris"):
            cells.append(result.alpha)
        return cells
    verdict = result.verdict
    return [
        verdict.required_alpha(),
        verdict.alpha_max if verdict.alpha_max is not None else math.inf,
        verdict.kind.value,
    ]


def run_sweep(scenario: Scenario) -> SweepTable:
    """Run the sweep described by the scenario; requires a [sweep] section."""
    if scenario.sweep is None:
        raise ValueError("scenario has no [sweep] section")
    cache = _CorrelationCache(scenario)
    columns = _columns(scenario)
    value_cells = len(columns) - 2  # minus axis and error columns
    rows = []
    for value in scenario.sweep.values():
        try:
            results = evaluate_curves(scenario, value, cache)
            cells = []
            for result in results:
                cells.extend(_result_cells(scenario, result))
            rows.append(tuple([value] + cells + [""]))
        except ValueError as exc:
            rows.append(tuple([value] + [math.nan] * value_cells + [str(exc)]))
    return SweepTable(tuple(columns), tuple(rows))


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.9g}"
    return str(value)


def emit_csv(table: SweepTable, destination) -> None:
    """Write a table as CSV: header row with units, 9 significant digits,
    UTF-8, LF line endings. `destination` is a path or a text file object."""

    def write(handle):
        handle.write(",".join(table.columns) + "\n")
        for row in table.rows:
            handle.write(",".join(_format_cell(cell) for cell in row) + "\n")

    if hasattr(destination, "write"):
        write(destination)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            write(handle)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {destination}: {exc}") from exc
