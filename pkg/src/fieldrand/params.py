"""Physical parameters and validation shared by every other module.

Natural units c = hbar = 1 throughout. All quantities are dimensionless
multiples of the atomic frequency scale unless noted otherwise.

The detector smearing enters every mode sum only through its Fourier
transform, taken here as ``profile_ft(k) = exp(-(atom_size * k)**2)``.
Note this convention ties the Gaussian width in k-space directly to
``1/atom_size``; an alternative normalization of the real-space profile
would put a factor 1/4 in the exponent. The form above is the one all
numerical results in this package are defined against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FieldrandError",
    "ConfigError",
    "FreeSpace",
    "Periodic",
    "Dirichlet",
    "Scenario",
    "PhysicalConfig",
    "validate",
    "profile_ft",
    "scenario_name",
    "parse_config_file",
]


class FieldrandError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FieldrandError):
    """A configuration value violates a domain constraint."""


@dataclass(frozen=True)
class FreeSpace:
    """Unbounded 1+1D field; continuum of modes."""


@dataclass(frozen=True)
class Periodic:
    """Periodic cavity of the given length.

    Mode wavenumbers are k_n = 2*pi*n/length for n >= 1 (both travelling
    directions are folded into the mode weight). Observables do not depend
    on ``position``; the field is kept so cavity scenarios share a shape.
    """

    length: float
    position: float = 0.0


@dataclass(frozen=True)
class Dirichlet:
    """Cavity with reflecting walls at x = 0 and x = length.

    Mode wavenumbers are k_n = pi*n/length, and the detector at
    ``position`` couples to each standing wave through sin(k_n * position).
    """

    length: float
    position: float


Scenario = FreeSpace | Periodic | Dirichlet


@dataclass(frozen=True)
class PhysicalConfig:
    """Immutable bundle of the physical parameters of one evaluation.

    Parameters
    ----------
    coupling : float
        Interaction strength; must be positive.
    atom_size : float
        Gaussian smearing length scale of the detector; must be positive.
    gap : float
        Energy gap between the two detector levels; must be positive.
    duration : float
        Length of the sharp interaction window [0, duration]; nonnegative.
    amplitude : float
        Ground-state amplitude a of the prepared state
        a|g> + sqrt(1 - a^2)|e>; in [0, 1].
    scenario : Scenario
        Boundary conditions of the field.
    cutoff : float
        Dimensionless mode cutoff; wavenumbers up to cutoff/atom_size are
        included in integrals and mode sums. Must be positive.
    """

    coupling: float
    atom_size: float
    gap: float
    duration: float
    amplitude: float = 1.0
    scenario: Scenario = field(default_factory=FreeSpace)
    cutoff: float = 6.0

    def __post_init__(self) -> None:
        validate(self)


def validate(config: PhysicalConfig) -> PhysicalConfig:
    """Check every domain constraint; return the config or raise ConfigError."""
    if not config.coupling > 0:
        raise ConfigError("coupling must be positive")
    if not config.atom_size > 0:
        raise ConfigError("atom_size must be positive")
    if not config.gap > 0:
        raise ConfigError("gap must be positive")
    if not config.duration >= 0:
        raise ConfigError("duration must be nonnegative")
    if not 0.0 <= config.amplitude <= 1.0:
        raise ConfigError("amplitude must lie in [0, 1]")
    if not config.cutoff > 0:
        raise ConfigError("cutoff must be positive")
    scen = config.scenario
    if isinstance(scen, (Periodic, Dirichlet)):
        if not scen.length > 0:
            raise ConfigError("cavity length must be positive")
        # small-detector regime; mode sums assume the smearing fits the cavity
        if not config.atom_size <= scen.length / 100.0:
            raise ConfigError(
                "atom_size must not exceed length/100 in a cavity "
                f"(got {config.atom_size} for length {scen.length})"
            )
        if isinstance(scen, Dirichlet) and not 0.0 < scen.position < scen.length:
            raise ConfigError("Dirichlet position must lie strictly inside (0, length)")
    elif not isinstance(scen, FreeSpace):
        raise ConfigError(f"unknown scenario {scen!r}")
    return config


def profile_ft(k, atom_size: float):
    """Fourier transform of the detector smearing, exp(-(atom_size*k)^2).

    Even in k, equals 1 at k = 0, and decays below 1e-15 beyond
    6/atom_size, which is what makes a dimensionless cutoff of 6 safe.
    Accepts scalars or arrays.
    """
    k = np.asarray(k, dtype=float)
    out = np.exp(-((atom_size * k) ** 2))
    return out if out.ndim else float(out)


_SCENARIO_NAMES = ("free_space", "periodic", "dirichlet")


def scenario_name(scen: Scenario) -> str:
    """Stable lowercase tag used in files and CSV output."""
    if isinstance(scen, FreeSpace):
        return "free_space"
    if isinstance(scen, Periodic):
        return "periodic"
    return "dirichlet"


def _parse_items(path: str) -> dict[str, str]:
    items: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, value = line.split("=", 1)
                items[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return items


def _build_scenario(items: dict[str, str], path: str) -> Scenario:
    name = items.pop("scenario", "free_space")
    if name not in _SCENARIO_NAMES:
        raise ConfigError(f"{path}: scenario must be one of {', '.join(_SCENARIO_NAMES)}")
    length = items.pop("length", None)
    position = items.pop("position", None)
    if name == "free_space":
        if length is not None or position is not None:
            raise ConfigError(f"{path}: length/position only apply to cavity scenarios")
        return FreeSpace()
    if length is None:
        raise ConfigError(f"{path}: scenario '{name}' requires a length")
    lengthv = _to_float(length, "length", path)
    if name == "periodic":
        pos = _to_float(position, "position", path) if position is not None else 0.0
        return Periodic(lengthv, pos)
    if position is None:
        raise ConfigError(f"{path}: dirichlet scenario requires a position")
    return Dirichlet(lengthv, _to_float(position, "position", path))


def _to_float(text: str, key: str, path: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{path}: {key} is not a number: {text!r}") from exc


def config_from_items(items: dict[str, str], path: str = "<config>") -> PhysicalConfig:
    """Build a PhysicalConfig from string key/value pairs (consumes ``items``)."""
    scenario = _build_scenario(items, path)
    values: dict[str, float] = {}
    for key in ("coupling", "atom_size", "gap", "duration", "amplitude", "cutoff"):
        if key in items:
            values[key] = _to_float(items.pop(key), key, path)
    for key in ("coupling", "atom_size", "gap", "duration"):
        if key not in values:
            raise ConfigError(f"{path}: missing required key '{key}'")
    if items:
        unknown = ", ".join(sorted(items))
        raise ConfigError(f"{path}: unknown key(s): {unknown}")
    try:
        return PhysicalConfig(scenario=scenario, **values)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def parse_config_file(path: str) -> PhysicalConfig:
    """Read a plain ``key = value`` file (with ``#`` comments) into a config."""
    return config_from_items(_parse_items(path), path)
