"""Scenario files: a line-oriented configuration format for sweeps.

The grammar is deliberately small (see README for the full reference):
`[section]` headers introduce key/value blocks, `key = value` lines assign
settings, `#` starts a comment anywhere, and blank lines are ignored. The
`[curve]` section may repeat, once per output column group; inside
`[wideband]` the `scatterer` key may repeat. Every dB-valued key carries
its convention in the name (`*_dbm` absolute power, `*_db` power ratio,
`*_alpha*_db` amplitude with the 20*log10 convention).

Parsing validates everything it can see (unknown keys, missing required
fields, non-increasing ranges) and reports errors with line numbers; dB
fields are converted to linear units on load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .channel import Scatterer
from .params import (
    db_to_linear_amplitude,
    db_to_linear_power,
    dbm_to_watts,
)

__all__ = [
    "ScenarioError",
    "LinkModel",
    "SweepSpec",
    "CurveSpec",
    "Scenario",
    "parse_scenario",
    "load_scenario",
]

VARIANTS = ("passive_ris", "active_ris", "ncr", "direct_only")
REFERENCE_VARIANTS = ("passive_ris", "active_ris")
SWEEP_AXES = ("d1", "d2", "d3", "node_x", "bs_antennas", "mismatch_deg")
MODES = ("snr", "required_alpha")
LINK_KINDS = ("free_space", "umi", "fixed_db", "off")


class ScenarioError(ValueError):
    """Scenario parse or validation failure, with a line number when the
    offending text is known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class LinkModel:
    """How one link's large-scale gain is obtained."""

    kind: str  # free_space | umi | fixed_db | off
    gain_linear: float | None = None  # set for fixed_db

    def needs_distance(self) -> bool:
        return self.kind in ("free_space", "umi")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    num_points: int

    def values(self) -> list[float]:
        if self.num_points == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.num_points - 1)
        return [self.start + i * step for i in range(self.num_points)]


@dataclass(frozen=True)
class CurveSpec:
    """One output column group: a technology to evaluate (mode `snr`) or a
    comparison target (mode `required_alpha`)."""

    label: str
    variant: str | None = None
    ris_elements: int | None = None
    alpha: float | None = None  # fixed gain; otherwise optimized under caps
    alpha_max: float | None = None  # per-curve cap override
    versus: str | None = None  # required_alpha mode: reference technology
    ref_ris_elements: int | None = None
    ref_alpha: float | None = None  # reference active-RIS fixed amplitude
    ref_alpha_max: float | None = None  # ... or its cap (optimal gain used)


@dataclass
class Scenario:
    """Fully validated sweep/evaluation description (all linear units)."""

    power_w: float
    noise_w: float
    bs_antennas: int
    ris_elements: int
    links: dict[str, LinkModel]
    curves: list[CurveSpec]
    mode: str = "snr"
    wavelength_m: float | None = None
    carrier_ghz: float | None = None
    bs_pos: tuple | None = None
    ue_pos: tuple | None = None
    node_pos: tuple | None = None
    d1: float | None = None
    d2: float | None = None
    d3: float | None = None
    alignment: float = 1.0
    mismatch_deg: float = 0.0
    scatterers: list[Scatterer] = field(default_factory=list)
    sweep: SweepSpec | None = None
    ncr_alpha_max: float | None = None
    aris_alpha_max: float | None = None
    radiated_power_max_w: float | None = None
    seed: int = 0

    @property
    def wideband(self) -> bool:
        return bool(self.scatterers)

    @property
    def has_direct(self) -> bool:
        return self.links["ue_bs"].kind != "off"


# Known keys per section (value kind strings drive the raw parse).
_SECTION_KEYS = {
    "system": {
        "power_dbm": "float",
        "power_w": "float",
        "noise_dbm": "float",
        "noise_w": "float",
        "bs_antennas": "int",
        "ris_elements": "int",
    },
    "links": {"ue_node": "link", "node_bs": "link", "ue_bs": "link"},
    "radio": {"wavelength_m": "float", "carrier_ghz": "float"},
    "geometry": {"bs": "vec3", "ue": "vec3", "node": "vec3"},
    "distances": {"d1": "float", "d2": "float", "d3": "float"},
    "direct": {"alignment": "float", "mismatch_deg": "float"},
    "wideband": {"scatterer": "scatterer"},
    "sweep": {
        "axis": "word",
        "start": "float",
        "stop": "float",
        "points": "int",
        "step": "float",
    },
    "constraints": {
        "ncr_alpha_max": "float",
        "ncr_alpha_max_db": "float",
        "aris_alpha_max": "float",
        "aris_alpha_max_db": "float",
        "radiated_power_max_w": "float",
    },
    "output": {"mode": "word", "seed": "int"},
    "curve": {
        "label": "word",
        "variant": "word",
        "ris_elements": "int",
        "alpha": "float",
        "alpha_db": "float",
        "alpha_max": "float",
        "alpha_max_db": "float",
        "versus": "word",
        "ref_ris_elements": "int",
        "ref_alpha": "float",
        "ref_alpha_max": "float",
    },
}
_REPEATABLE_KEYS = {("wideband", "scatterer")}
_REPEATABLE_SECTIONS = {"curve"}


def _parse_value(kind: str, raw: str, line: int):
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind == "word":
            if len(raw.split()) != 1:
                raise ValueError
            return raw
        if kind == "vec3":
            parts = [float(c) for c in raw.split()]
            if len(parts) != 3:
                raise ValueError
            return tuple(parts)
        if kind == "link":
            parts = raw.split()
            if parts[0] not in LINK_KINDS:
                raise ScenarioError(
                    f"unknown link model {parts[0]!r} (expected one of {', '.join(LINK_KINDS)})",
                    line,
                )
            if parts[0] == "fixed_db":
                if len(parts) != 2:
                    raise ValueError
                return LinkModel("fixed_db", db_to_linear_power(float(parts[1])))
            if len(parts) != 1:
                raise ValueError
            return LinkModel(parts[0])
        if kind == "scatterer":
            parts = [float(c) for c in raw.split()]
            if len(parts) == 3:
                return Scatterer(tuple(parts))
            if len(parts) == 4:
                return Scatterer(tuple(parts[:3]), parts[3])
            raise ValueError
    except ScenarioError:
        raise
    except ValueError:
        raise ScenarioError(f"cannot parse value {raw!r} as {kind}", line) from None
    raise ScenarioError(f"internal: unknown value kind {kind}", line)


def _tokenize(text: str):
    """Yield (line_number, kind, payload) for sections and assignments."""
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("unterminated section header", lineno)
            yield lineno, "section", line[1:-1].strip()
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ScenarioError(f"expected 'key = value', got {line!r}", lineno)
        yield lineno, "assign", (key, value)


def _collect(text: str):
    """First pass: group assignments by section, tracking line numbers."""
    sections: dict[str, dict] = {}
    curves: list[tuple[int, dict]] = []
    current: dict | None = None
    current_name = None
    seen: set[str] = set()
    for lineno, kind, payload in _tokenize(text):
        if kind == "section":
            name = payload
            if name not in _SECTION_KEYS:
                raise ScenarioError(f"unknown section [{name}]", lineno)
            if name in _REPEATABLE_SECTIONS:
                current = {}
                curves.append((lineno, current))
            else:
                if name in seen:
                    raise ScenarioError(f"duplicate section [{name}]", lineno)
                seen.add(name)
                current = {}
                sections[name] = current
            current_name = name
            continue
        key, raw = payload
        if current is None:
            raise ScenarioError("assignment outside of any section", lineno)
        known = _SECTION_KEYS[current_name]
        if key not in known:
            raise ScenarioError(
                f"unknown key {key!r} in section [{current_name}]", lineno
            )
        value = _parse_value(known[key], raw, lineno)
        if (current_name, key) in _REPEATABLE_KEYS:
            current.setdefault(key, []).append((lineno, value))
        else:
            if key in current:
                raise ScenarioError(
                    f"duplicate key {key!r} in section [{current_name}]", lineno
                )
            current[key] = (lineno, value)
    return sections, curves


def _take(section: dict, key: str, default=None):
    entry = section.get(key)
    return default if entry is None else entry[1]


def _line_of(section: dict, key: str, fallback: int | None = None):
    entry = section.get(key)
    return fallback if entry is None else entry[0]


def _exactly_one(section: dict, section_name: str, *keys):
    present = [k for k in keys if k in section]
    if len(present) != 1:
        raise ScenarioError(
            f"section [{section_name}] needs exactly one of {', '.join(keys)}",
            next((_line_of(section, k) for k in present), None),
        )
    return present[0]


def _at_most_one(section: dict, section_name: str, *keys):
    present = [k for k in keys if k in section]
    if len(present) > 1:
        raise ScenarioError(
            f"section [{section_name}] accepts at most one of {', '.join(keys)}",
            _line_of(section, present[-1]),
        )
    return present[0] if present else None


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    sections, curve_blocks = _collect(text)

    system = sections.get("system")
    if system is None:
        raise ScenarioError("missing required section [system]")
    pkey = _exactly_one(system, "system", "power_dbm", "power_w")
    power_w = (
        dbm_to_watts(_take(system, "power_dbm")) if pkey == "power_dbm" else _take(system, "power_w")
    )
    nkey = _exactly_one(system, "system", "noise_dbm", "noise_w")
    noise_w = (
        dbm_to_watts(_take(system, "noise_dbm")) if nkey == "noise_dbm" else _take(system, "noise_w")
    )
    if not power_w > 0.0:
        raise ScenarioError("transmit power must be > 0", _line_of(system, pkey))
    if not noise_w > 0.0:
        raise ScenarioError("noise power must be > 0", _line_of(system, nkey))
    bs_antennas = _take(system, "bs_antennas")
    if bs_antennas is None:
        raise ScenarioError("missing key 'bs_antennas' in [system]")
    if bs_antennas < 1:
        raise ScenarioError("bs_antennas must be >= 1", _line_of(system, "bs_antennas"))
    ris_elements = _take(system, "ris_elements", 1)
    if ris_elements < 1:
        raise ScenarioError("ris_elements must be >= 1", _line_of(system, "ris_elements"))

    links_sec = sections.get("links")
    if links_sec is None:
        raise ScenarioError("missing required section [links]")
    links = {}
    for link in ("ue_node", "node_bs", "ue_bs"):
        model = _take(links_sec, link)
        if model is None:
            raise ScenarioError(f"missing key {link!r} in [links]")
        links[link] = model

    radio = sections.get("radio", {})
    wavelength_m = _take(radio, "wavelength_m")
    carrier_ghz = _take(radio, "carrier_ghz")
    if wavelength_m is not None and not wavelength_m > 0.0:
        raise ScenarioError("wavelength must be > 0", _line_of(radio, "wavelength_m"))
    if carrier_ghz is not None and not carrier_ghz > 0.0:
        raise ScenarioError("carrier frequency must be > 0", _line_of(radio, "carrier_ghz"))
    kinds = {model.kind for model in links.values()}
    if "free_space" in kinds and wavelength_m is None:
        raise ScenarioError("free_space links need 'wavelength_m' in [radio]")
    if "umi" in kinds and carrier_ghz is None:
        raise ScenarioError("umi links need 'carrier_ghz' in [radio]")

    geometry = sections.get("geometry", {})
    bs_pos = _take(geometry, "bs")
    ue_pos = _take(geometry, "ue")
    node_pos = _take(geometry, "node")
    have_geometry = bs_pos is not None and ue_pos is not None and node_pos is not None
    if geometry and not have_geometry:
        raise ScenarioError("section [geometry] needs all of bs, ue, node")

    dist_sec = sections.get("distances", {})
    d1 = _take(dist_sec, "d1")
    d2 = _take(dist_sec, "d2")
    d3 = _take(dist_sec, "d3")
    for key, value in (("d1", d1), ("d2", d2), ("d3", d3)):
        if value is not None and not value > 0.0:
            raise ScenarioError(f"{key} must be > 0", _line_of(dist_sec, key))

    direct_sec = sections.get("direct", {})
    alignment = _take(direct_sec, "alignment", 1.0)
    if not 0.0 < alignment <= 1.0:
        raise ScenarioError(
            "alignment must lie in (0, 1]", _line_of(direct_sec, "alignment")
        )
    mismatch_deg = _take(direct_sec, "mismatch_deg", 0.0)

    wideband_sec = sections.get("wideband", {})
    scatterers = [value for _, value in wideband_sec.get("scatterer", [])]
    if "wideband" in sections and not scatterers:
        raise ScenarioError("section [wideband] needs at least one 'scatterer'")
    if scatterers and "direct" in sections:
        raise ScenarioError(
            "sections [direct] and [wideband] are mutually exclusive"
        )
    if scatterers and not have_geometry:
        raise ScenarioError("section [wideband] needs [geometry] for the BS array")
    if scatterers and links["ue_bs"].kind == "off":
        raise ScenarioError("section [wideband] needs a ue_bs link that is not 'off'")

    sweep = None
    if "sweep" in sections:
        sweep = _parse_sweep(sections["sweep"])
        if sweep.axis == "node_x" and not have_geometry:
            raise ScenarioError("sweep axis 'node_x' needs a [geometry] section")
        if sweep.axis == "bs_antennas":
            for bound in (sweep.start, sweep.stop):
                if bound != int(bound) or bound < 1:
                    raise ScenarioError(
                        "sweep over bs_antennas needs integer bounds >= 1",
                        _line_of(sections["sweep"], "start"),
                    )

    constraints = sections.get("constraints", {})
    ncr_key = _at_most_one(constraints, "constraints", "ncr_alpha_max", "ncr_alpha_max_db")
    aris_key = _at_most_one(
        constraints, "constraints", "aris_alpha_max", "aris_alpha_max_db"
    )
    ncr_alpha_max = _cap_value(constraints, ncr_key)
    aris_alpha_max = _cap_value(constraints, aris_key)
    radiated = _take(constraints, "radiated_power_max_w")
    if radiated is not None and not radiated > 0.0:
        raise ScenarioError(
            "radiated_power_max_w must be > 0",
            _line_of(constraints, "radiated_power_max_w"),
        )

    output = sections.get("output", {})
    mode = _take(output, "mode", "snr")
    if mode not in MODES:
        raise ScenarioError(
            f"unknown mode {mode!r} (expected one of {', '.join(MODES)})",
            _line_of(output, "mode"),
        )
    seed = _take(output, "seed", 0)

    if not curve_blocks:
        raise ScenarioError("need at least one [curve] section")
    curves = []
    labels: set[str] = set()
    for header_line, block in curve_blocks:
        curves.append(
            _parse_curve(block, header_line, mode, labels, has_direct_or_wideband=(
                links["ue_bs"].kind != "off"
            ))
        )

    scenario = Scenario(
        power_w=power_w,
        noise_w=noise_w,
        bs_antennas=bs_antennas,
        ris_elements=ris_elements,
        links=links,
        curves=curves,
        mode=mode,
        wavelength_m=wavelength_m,
        carrier_ghz=carrier_ghz,
        bs_pos=bs_pos,
        ue_pos=ue_pos,
        node_pos=node_pos,
        d1=d1,
        d2=d2,
        d3=d3,
        alignment=alignment,
        mismatch_deg=mismatch_deg,
        scatterers=scatterers,
        sweep=sweep,
        ncr_alpha_max=ncr_alpha_max,
        aris_alpha_max=aris_alpha_max,
        radiated_power_max_w=radiated,
        seed=seed,
    )
    _check_distance_sources(scenario, sections)
    return scenario


def _cap_value(constraints: dict, key: str | None):
    if key is None:
        return None
    value = _take(constraints, key)
    if key.endswith("_db"):
        value = db_to_linear_amplitude(value)
    if not value > 0.0:
        raise ScenarioError(f"{key} must be > 0", _line_of(constraints, key))
    return value


def _parse_sweep(section: dict) -> SweepSpec:
    axis = _take(section, "axis")
    if axis is None:
        raise ScenarioError("missing key 'axis' in [sweep]")
    if axis not in SWEEP_AXES:
        raise ScenarioError(
            f"unknown sweep axis {axis!r} (expected one of {', '.join(SWEEP_AXES)})",
            _line_of(section, "axis"),
        )
    start = _take(section, "start")
    stop = _take(section, "stop")
    if start is None or stop is None:
        raise ScenarioError("section [sweep] needs 'start' and 'stop'")
    step_key = _exactly_one(section, "sweep", "points", "step")
    if step_key == "points":
        num_points = _take(section, "points")
        if num_points < 1:
            raise ScenarioError("points must be >= 1", _line_of(section, "points"))
        if num_points == 1 and stop != start:
            raise ScenarioError(
                "a single-point sweep needs start == stop", _line_of(section, "points")
            )
    else:
        step = _take(section, "step")
        if not step > 0.0:
            raise ScenarioError("step must be > 0", _line_of(section, "step"))
        num_points = int(math.floor((stop - start) / step + 1e-9)) + 1
    if num_points > 1 and not stop > start:
        raise ScenarioError(
            f"empty or non-increasing sweep range ({start}, {stop})",
            _line_of(section, "stop"),
        )
    return SweepSpec(axis=axis, start=start, stop=stop, num_points=num_points)


def _parse_curve(
    block: dict, header_line: int, mode: str, labels: set, has_direct_or_wideband: bool
) -> CurveSpec:
    label = _take(block, "label")
    if label is None:
        raise ScenarioError("every [curve] needs a 'label'", header_line)
    if label in labels:
        raise ScenarioError(f"duplicate curve label {label!r}", _line_of(block, "label"))
    labels.add(label)

    alpha_key = _at_most_one(block, "curve", "alpha", "alpha_db")
    alpha = _take(block, alpha_key) if alpha_key else None
    if alpha_key == "alpha_db":
        alpha = db_to_linear_amplitude(alpha)
    if alpha is not None and alpha < 0.0:
        raise ScenarioError("alpha must be >= 0", _line_of(block, alpha_key))

    cap_key = _at_most_one(block, "curve", "alpha_max", "alpha_max_db")
    alpha_max = _take(block, cap_key) if cap_key else None
    if cap_key == "alpha_max_db":
        alpha_max = db_to_linear_amplitude(alpha_max)
    if alpha_max is not None and not alpha_max > 0.0:
        raise ScenarioError("alpha_max must be > 0", _line_of(block, cap_key))

    ris_elements = _take(block, "ris_elements")
    if ris_elements is not None and ris_elements < 1:
        raise ScenarioError("ris_elements must be >= 1", _line_of(block, "ris_elements"))

    if mode == "snr":
        variant = _take(block, "variant")
        if variant is None:
            raise ScenarioError(
                f"curve {label!r} needs a 'variant' in mode snr", header_line
            )
        if variant not in VARIANTS:
            raise ScenarioError(
                f"unknown variant {variant!r} (expected one of {', '.join(VARIANTS)})",
                _line_of(block, "variant"),
            )
        if _take(block, "versus") is not None:
            raise ScenarioError(
                "'versus' is only meaningful in mode required_alpha",
                _line_of(block, "versus"),
            )
        return CurveSpec(
            label=label, variant=variant, ris_elements=ris_elements,
            alpha=alpha, alpha_max=alpha_max,
        )

    versus = _take(block, "versus")
    if versus is None:
        raise ScenarioError(
            f"curve {label!r} needs a 'versus' in mode required_alpha", header_line
        )
    if versus not in REFERENCE_VARIANTS:
        raise ScenarioError(
            f"unknown reference {versus!r} (expected one of {', '.join(REFERENCE_VARIANTS)})",
            _line_of(block, "versus"),
        )
    ref_alpha = _take(block, "ref_alpha")
    ref_alpha_max = _take(block, "ref_alpha_max")
    for key, value in (("ref_alpha", ref_alpha), ("ref_alpha_max", ref_alpha_max)):
        if value is not None and not value > 0.0:
            raise ScenarioError(f"{key} must be > 0", _line_of(block, key))
    if versus == "active_ris":
        if (ref_alpha is None) == (ref_alpha_max is None):
            raise ScenarioError(
                f"curve {label!r}: comparing against the active RIS needs exactly "
                "one of ref_alpha (fixed) or ref_alpha_max (optimal under cap)",
                header_line,
            )
    ref_ris_elements = _take(block, "ref_ris_elements")
    if ref_ris_elements is not None and ref_ris_elements < 1:
        raise ScenarioError(
            "ref_ris_elements must be >= 1", _line_of(block, "ref_ris_elements")
        )
    return CurveSpec(
        label=label,
        versus=versus,
        ris_elements=ris_elements,
        ref_ris_elements=ref_ris_elements,
        ref_alpha=ref_alpha,
        ref_alpha_max=ref_alpha_max,
    )


def _check_distance_sources(scenario: Scenario, sections: dict) -> None:
    """Every distance-based link must get its distance from [distances],
    [geometry], or the sweep axis."""
    axis = scenario.sweep.axis if scenario.sweep else None
    have_geometry = scenario.bs_pos is not None
    for link, distance_name in (("ue_node", "d1"), ("node_bs", "d2"), ("ue_bs", "d3")):
        model = scenario.links[link]
        if not model.needs_distance():
            continue
        explicit = getattr(scenario, distance_name) is not None
        from_axis = axis == distance_name
        from_geometry = have_geometry
        if not (explicit or from_axis or from_geometry):
            raise ScenarioError(
                f"link {link!r} uses a distance-based model but no {distance_name} is "
                "available from [distances], [geometry], or the sweep axis"
            )
    if scenario.mode == "snr":
        _check_gain_sources(scenario)


def _check_gain_sources(scenario: Scenario) -> None:
    """Curves that optimize a gain need at least one finite cap."""
    for curve in scenario.curves:
        if curve.variant not in ("ncr", "active_ris") or curve.alpha is not None:
            continue
        global_cap = (
            scenario.ncr_alpha_max if curve.variant == "ncr" else scenario.aris_alpha_max
        )
        if (
            curve.alpha_max is None
            and global_cap is None
            and scenario.radiated_power_max_w is None
        ):
            raise ScenarioError(
                f"curve {curve.label!r} has no fixed alpha and no cap; add alpha, "
                "alpha_max, a [constraints] cap, or radiated_power_max_w"
            )


def load_scenario(path) -> Scenario:
    """Read and parse a scenario file."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return parse_scenario(text)
