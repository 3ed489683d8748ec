"""Parameter sweeps over certification runs, with CSV emission and presets.

A sweep is a cartesian product of value grids attached to config fields,
evaluated against a fixed baseline. Rows come out in lexicographic grid
order, one CSV line per point, and a failed point writes its parameters
plus an error message instead of aborting the whole run.

Certification work factors through a per-run cache of unit-coupling
kernel integrals, keyed on the parameters the integrals depend on
(window, smearing, gap, cutoff, geometry). Rows then differ only by the
cheap state assembly, which keeps dense grids fast, and the coupling axis
exactly quadratic for free. Periodic rings deliberately share cache
entries across detector positions, which the mode weights do not see.

Output is deterministic byte-for-byte: row order is fixed by the grids,
floats are printed with 12 significant digits, and thread-parallel runs
reassemble results in submission order.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .kernels import kernels_from_unit, _unit_kernels
from .params import (
    ConfigError,
    Dirichlet,
    FieldrandError,
    FreeSpace,
    Periodic,
    PhysicalConfig,
    Scenario,
    _parse_items,
    config_from_items,
    scenario_name,
)
from .randomness import certify
from .rwa import ResonantSetup, difference_ratio

__all__ = [
    "SweepSpec",
    "Row",
    "SweepResult",
    "run_sweep",
    "emit_csv",
    "preset",
    "PRESET_NAMES",
    "parse_sweep_file",
]

# config fields a grid may attach to; "position" reaches into the scenario
_SCALAR_FIELDS = ("coupling", "atom_size", "gap", "duration", "amplitude", "cutoff")
_AXIS_FIELDS = _SCALAR_FIELDS + ("position", "scenario")


@dataclass(frozen=True)
class SweepSpec:
    """Baseline config plus ordered (field, grid) axes and run controls."""

    base: PhysicalConfig
    axes: tuple[tuple[str, tuple], ...]
    compare_rwa: bool = False
    mode_index: int = 1
    threads: int = 1
    output: str | None = None

    def __post_init__(self) -> None:
        if not self.axes:
            raise ConfigError("a sweep needs at least one axis")
        seen: set[str] = set()
        for name, values in self.axes:
            if name not in _AXIS_FIELDS:
                raise ConfigError(
                    f"unknown sweep field {name!r}; valid: {', '.join(_AXIS_FIELDS)}"
                )
            if name in seen:
                raise ConfigError(f"duplicate sweep field {name!r}")
            seen.add(name)
            if len(values) == 0:
                raise ConfigError(f"empty grid for sweep field {name!r}")
            if name == "scenario":
                if not all(isinstance(v, (FreeSpace, Periodic, Dirichlet)) for v in values):
                    raise ConfigError("scenario grid entries must be scenario values")
            else:
                diffs = np.diff(np.asarray(values, dtype=float))
                if len(diffs) and not (np.all(diffs > 0.0) or np.all(diffs < 0.0)):
                    raise ConfigError(f"grid for {name!r} must be strictly monotone")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.mode_index < 1:
            raise ConfigError("mode_index must be >= 1")


@dataclass(frozen=True)
class Row:
    """One evaluated grid point; result fields are None when error is set."""

    amplitude: float
    duration: float
    coupling: float
    atom_size: float
    gap: float
    scenario: Scenario
    cutoff: float
    purity: float | None = None
    min_entropy_bits: float | None = None
    h_rwa: float | None = None
    ratio: float | None = None
    kernel_err: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[Row, ...]


def _cache_key(config: PhysicalConfig):
    scen = config.scenario
    if isinstance(scen, FreeSpace):
        tag: tuple = ("free",)
    elif isinstance(scen, Periodic):
        # position drops out of the ring mode weights
        tag = ("periodic", scen.length)
    else:
        tag = ("dirichlet", scen.length, scen.position)
    return (config.atom_size, config.gap, config.duration, config.cutoff) + tag


def _grid_points(spec: SweepSpec):
    names = [name for name, _ in spec.axes]
    for combo in itertools.product(*(values for _, values in spec.axes)):
        yield dict(zip(names, combo))


def _materialize(base: PhysicalConfig, assignment: dict):
    """Split one grid assignment into scalar fields and a scenario."""
    vals = dict(assignment)
    scen = vals.pop("scenario", base.scenario)
    position = vals.pop("position", None)
    fields = {name: getattr(base, name) for name in _SCALAR_FIELDS}
    fields.update((k, float(v)) for k, v in vals.items())
    if position is not None:
        if isinstance(scen, FreeSpace):
            return fields, scen, "position applies only to cavity scenarios"
        scen = replace(scen, position=float(position))
    return fields, scen, None


def _evaluate(fields: dict, scen: Scenario, fail: str | None, spec: SweepSpec, cache: dict) -> Row:
    shell = Row(scenario=scen, **fields)
    if fail is not None:
        return replace(shell, error=fail)
    try:
        config = PhysicalConfig(scenario=scen, **fields)
        cached = cache[_cache_key(config)]
        if isinstance(cached, FieldrandError):
            return replace(shell, error=str(cached))
        kernels = kernels_from_unit(config, *cached)
        report = certify(config, kernels=kernels)
        out = replace(
            shell,
            purity=report.purity,
            min_entropy_bits=report.min_entropy_bits,
            kernel_err=kernels.error,
        )
        if spec.compare_rwa:
            rec = difference_ratio(config, ResonantSetup(spec.mode_index), kernels=kernels)
            out = replace(out, h_rwa=rec.h_rwa, ratio=rec.ratio)
        return out
    except FieldrandError as exc:
        return replace(shell, error=str(exc))


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate every grid point; identical output for any thread count."""
    points = [_materialize(spec.base, assignment) for assignment in _grid_points(spec)]

    # fill the kernel cache serially, first-use order, so parallel row
    # evaluation below is pure lookup and scheduling cannot reorder work
    cache: dict = {}
    for fields, scen, fail in points:
        if fail is not None:
            continue
        try:
            config = PhysicalConfig(scenario=scen, **fields)
        except ConfigError:
            continue
        key = _cache_key(config)
        if key in cache:
            continue
        try:
            cache[key] = _unit_kernels(
                config.atom_size, config.gap, config.duration, config.scenario, config.cutoff
            )
        except FieldrandError as exc:
            cache[key] = exc

    if spec.threads == 1:
        rows = [_evaluate(*point, spec, cache) for point in points]
    else:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            rows = list(pool.map(lambda point: _evaluate(*point, spec, cache), points))
    return SweepResult(spec=spec, rows=tuple(rows))


_BASE_COLUMNS = ("a", "T", "lambda", "sigma", "omega", "scenario", "L", "x_a", "N_c")
_RESULT_COLUMNS = ("purity", "min_entropy_bits", "kernel_err", "error")
_COMPARE_COLUMNS = ("purity", "min_entropy_bits", "h_rwa", "R", "kernel_err", "error")


def _fmt(value: float | None) -> str:
    return "" if value is None else "%.12g" % value


def _row_record(row: Row, compare: bool) -> list[str]:
    scen = row.scenario
    length = "" if isinstance(scen, FreeSpace) else _fmt(scen.length)
    position = "" if isinstance(scen, FreeSpace) else _fmt(scen.position)
    record = [
        _fmt(row.amplitude),
        _fmt(row.duration),
        _fmt(row.coupling),
        _fmt(row.atom_size),
        _fmt(row.gap),
        scenario_name(scen),
        length,
        position,
        _fmt(row.cutoff),
        _fmt(row.purity),
        _fmt(row.min_entropy_bits),
    ]
    if compare:
        record += [_fmt(row.h_rwa), _fmt(row.ratio)]
    record += [_fmt(row.kernel_err), row.error or ""]
    return record


def emit_csv(result: SweepResult, path: str) -> None:
    """Write the fixed-schema CSV; byte-identical for identical specs."""
    compare = result.spec.compare_rwa
    header = _BASE_COLUMNS + (_COMPARE_COLUMNS if compare else _RESULT_COLUMNS)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in result.rows:
                writer.writerow(_row_record(row, compare))
    except OSError as exc:
        raise FieldrandError(f"cannot write CSV to {path}: {exc}") from exc


def _tuple(values) -> tuple:
    return tuple(float(v) for v in values)


_THREE_AMPLITUDES = (0.0, 2.0 ** -0.5, 1.0)


def _baseline(scenario: Scenario, duration: float, amplitude: float = 0.0) -> PhysicalConfig:
    return PhysicalConfig(
        coupling=0.01,
        atom_size=0.001,
        gap=1.0,
        duration=duration,
        amplitude=amplitude,
        scenario=scenario,
        cutoff=6.0,
    )


def _preset_fig2() -> SweepSpec:
    # grid densities are not pinned anywhere; 51 x 100 reconstructs the
    # published panels at comparable resolution
    return SweepSpec(
        base=_baseline(FreeSpace(), duration=0.02),
        axes=(
            ("amplitude", _tuple(np.linspace(0.0, 1.0, 51))),
            ("duration", _tuple(np.linspace(0.02, 2.0, 100))),
        ),
    )


def _preset_fig3() -> SweepSpec:
    length = 3.0
    x_a = math.pi * length / 6.0
    return SweepSpec(
        base=_baseline(FreeSpace(), duration=0.04),
        axes=(
            ("scenario", (FreeSpace(), Periodic(length, x_a), Dirichlet(length, x_a))),
            ("amplitude", _THREE_AMPLITUDES),
            ("duration", _tuple(np.linspace(0.04, 4.0, 100))),
        ),
    )


def _preset_fig4() -> SweepSpec:
    return SweepSpec(
        base=_baseline(FreeSpace(), duration=1.0),
        axes=(
            ("atom_size", _tuple(np.logspace(-3.0, 0.0, 25))),
            ("amplitude", _tuple(np.linspace(0.0, 1.0, 51))),
        ),
    )


def _preset_fig5() -> SweepSpec:
    lengths = (3.0, 10.0, 30.0, 100.0)
    scenarios: tuple[Scenario, ...] = (FreeSpace(),)
    scenarios += tuple(Periodic(L, math.pi * L / 6.0) for L in lengths)
    scenarios += tuple(Dirichlet(L, math.pi * L / 6.0) for L in lengths)
    return SweepSpec(
        base=_baseline(FreeSpace(), duration=1.0),
        axes=(("scenario", scenarios), ("amplitude", _THREE_AMPLITUDES)),
    )


def _preset_fig6() -> SweepSpec:
    length = 10.0
    positions = _tuple(np.linspace(0.0, length, 52)[1:-1])
    return SweepSpec(
        base=_baseline(Dirichlet(length, positions[0]), duration=1.0),
        axes=(("amplitude", _THREE_AMPLITUDES), ("position", positions)),
    )


def _preset_fig7(kind: str) -> SweepSpec:
    setup = ResonantSetup(3)
    gap = 1.0
    if kind == "periodic":
        length = 2.0 * math.pi * setup.mode_index / gap
        scenario: Scenario = Periodic(length, math.pi * length / 6.0)
    else:
        length = math.pi * setup.mode_index / gap
        scenario = Dirichlet(length, math.pi * length / 6.0)
    return SweepSpec(
        base=_baseline(scenario, duration=0.25),
        axes=(
            ("amplitude", _tuple(np.linspace(0.0, 1.0, 21))),
            ("duration", _tuple(np.linspace(0.25, 15.0, 60))),
        ),
        compare_rwa=True,
        mode_index=setup.mode_index,
    )


_PRESETS = {
    "fig2": _preset_fig2,
    "fig3": _preset_fig3,
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6": _preset_fig6,
    "fig7-periodic": lambda: _preset_fig7("periodic"),
    "fig7-dirichlet": lambda: _preset_fig7("dirichlet"),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset(name: str) -> SweepSpec:
    """Named sweep matching one published panel's parameters."""
    try:
        build = _PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; valid: {', '.join(PRESET_NAMES)}"
        ) from None
    return build()


def _parse_grid(text: str, key: str, path: str) -> tuple:
    text = text.strip()
    for kind in ("linspace", "logspace"):
        if text.startswith(kind + ":"):
            parts = text.split(":")
            if len(parts) != 4:
                raise ConfigError(f"{path}: {key} must be {kind}:lo:hi:count")
            try:
                lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
            except ValueError as exc:
                raise ConfigError(f"{path}: bad {kind} bounds in {key}: {exc}") from exc
            if count < 1:
                raise ConfigError(f"{path}: {key} needs count >= 1")
            if kind == "linspace":
                return _tuple(np.linspace(lo, hi, count))
            if lo <= 0.0 or hi <= 0.0:
                raise ConfigError(f"{path}: logspace bounds in {key} must be positive")
            return _tuple(np.logspace(math.log10(lo), math.log10(hi), count))
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"{path}: {key} is not a grid: {text!r}") from exc


def _to_int(text: str, key: str, path: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{path}: {key} is not an integer: {text!r}") from exc


def _parse_flag(text: str, key: str, path: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"{path}: {key} must be true or false, got {text!r}")


def parse_sweep_file(path: str) -> SweepSpec:
    """Read a sweep spec file: baseline config keys plus sweep controls.

    Grid lines are ``sweep.<field> = v1,v2,...`` or ``linspace:lo:hi:n`` or
    ``logspace:lo:hi:n`` (log-spaced between the two positive endpoints).
    Optional controls: ``threads``, ``compare_rwa``, ``mode_index``,
    ``output``. Baseline values for swept scalar fields may be omitted;
    the first grid value then stands in.
    """
    items = _parse_items(path)
    axes: list[tuple[str, tuple]] = []
    for key in list(items):
        if not key.startswith("sweep."):
            continue
        field = key[len("sweep.") :]
        if field == "scenario":
            raise ConfigError(f"{path}: scenario grids are preset/library-only")
        axes.append((field, _parse_grid(items.pop(key), key, path)))

    threads = _to_int(items.pop("threads", "1"), "threads", path)
    mode_index = _to_int(items.pop("mode_index", "1"), "mode_index", path)
    compare_rwa = _parse_flag(items.pop("compare_rwa", "false"), "compare_rwa", path)
    output = items.pop("output", None)

    for field, values in axes:
        if field in _SCALAR_FIELDS and field not in items:
            items[field] = repr(values[0])
        if field == "position" and "position" not in items:
            items["position"] = repr(values[0])
    base = config_from_items(items, path)
    return SweepSpec(
        base=base,
        axes=tuple(axes),
        compare_rwa=compare_rwa,
        mode_index=mode_index,
        threads=threads,
        output=output,
    )
