"""Resonant single-mode reference model and comparisons against it.

Keeping only the resonant cavity mode and the co-rotating part of the
interaction gives a model solvable in closed form: the detector precesses
through an angle proportional to the window length. The functions here
produce that reference state (exact and second-order forms), the relative
randomness overestimate of the reference versus the full calculation, and a
per-mode amplitude table that shows why dropping either approximation alone
is inconsistent (off-resonant co-rotating terms and counter-rotating terms
are bounded by the same 2/|detuning| envelope, while the resonant rotating
term grows linearly with the window).
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .atom_state import DensityMatrix2, purity
from .kernels import KernelSet
from .params import (
    ConfigError,
    Dirichlet,
    FieldrandError,
    Periodic,
    PhysicalConfig,
    Scenario,
    profile_ft,
)
from .randomness import certify, min_entropy_optimal

__all__ = [
    "ResonantSetup",
    "RatioRecord",
    "UndefinedRatioError",
    "resonant_scenario",
    "rabi_angle",
    "rwa_state_exact",
    "rwa_state_second_order",
    "difference_ratio",
    "mode_amplitude_diagnostic",
]

_ANGLE_WARN = 0.3


class UndefinedRatioError(FieldrandError):
    """The reference randomness vanished; the ratio has no meaning."""


@dataclass(frozen=True)
class ResonantSetup:
    """Choice of the cavity mode the detector gap is tuned to.

    ``mode_index`` is the 1-based index m; the cavity length must equal
    2*pi*m/gap (periodic) or pi*m/gap (dirichlet) so that mode m sits
    exactly on the gap.
    """

    mode_index: int

    def __post_init__(self) -> None:
        if self.mode_index < 1 or self.mode_index != int(self.mode_index):
            raise ConfigError("mode_index must be an integer >= 1")


def resonant_length(setup: ResonantSetup, gap: float, kind: str) -> float:
    if kind == "periodic":
        return 2.0 * math.pi * setup.mode_index / gap
    if kind == "dirichlet":
        return math.pi * setup.mode_index / gap
    raise ConfigError("resonant setups exist only for cavity scenarios")


def resonant_scenario(
    setup: ResonantSetup, gap: float, kind: str, position: float = 0.0
) -> Scenario:
    """Cavity scenario whose mode ``setup.mode_index`` lies exactly on the gap."""
    length = resonant_length(setup, gap, kind)
    if kind == "periodic":
        return Periodic(length, position)
    return Dirichlet(length, position)


def _check_resonant(config: PhysicalConfig, setup: ResonantSetup) -> Scenario:
    scen = config.scenario
    if isinstance(scen, Periodic):
        expected = resonant_length(setup, config.gap, "periodic")
    elif isinstance(scen, Dirichlet):
        expected = resonant_length(setup, config.gap, "dirichlet")
    else:
        raise ConfigError("no single-mode reference exists in free space")
    if not math.isclose(scen.length, expected, rel_tol=1e-9):
        raise ConfigError(
            f"cavity length {scen.length} is not resonant with mode {setup.mode_index} "
            f"(expected {expected})"
        )
    return scen


def rabi_angle(config: PhysicalConfig, setup: ResonantSetup) -> float:
    """Precession angle of the single-mode reference over the window.

    coupling*gap*profile_ft(gap)*duration/sqrt(2*pi*m) for a periodic cavity;
    the dirichlet version gains sin(gap*position) and loses the factor
    sqrt(2) in the denominator. Sign follows the standing-wave amplitude.
    """
    scen = _check_resonant(config, setup)
    base = config.coupling * config.gap * profile_ft(config.gap, config.atom_size)
    m = setup.mode_index
    if isinstance(scen, Periodic):
        return base * config.duration / math.sqrt(2.0 * math.pi * m)
    return (
        base
        * math.sin(config.gap * scen.position)
        * config.duration
        / math.sqrt(math.pi * m)
    )


def rwa_state_exact(amplitude: float, angle: float) -> DensityMatrix2:
    """Closed-form reference state after precession by ``angle``."""
    ground_w = amplitude * amplitude
    excited_w = 1.0 - ground_w
    s, c = math.sin(angle), math.cos(angle)
    coherence = amplitude * math.sqrt(excited_w) * c
    return DensityMatrix2(
        rho_gg=complex(ground_w + excited_w * s * s),
        rho_ge=complex(coherence),
        rho_eg=complex(coherence),
        rho_ee=complex(excited_w * c * c),
    )


def rwa_state_second_order(amplitude: float, angle: float) -> DensityMatrix2:
    """Reference state truncated at second order in the angle.

    This is the form used for like-for-like comparison with the second-order
    full calculation; it differs from the exact state at fourth order.
    Warns when |angle| > 0.3 where the truncation loses meaning.
    """
    if abs(angle) > _ANGLE_WARN:
        warnings.warn(
            f"precession angle {angle:.3g} beyond the small-angle regime",
            stacklevel=2,
        )
    ground_w = amplitude * amplitude
    excited_w = 1.0 - ground_w
    a2 = angle * angle
    coherence = amplitude * math.sqrt(excited_w) * (1.0 - a2 / 2.0)
    return DensityMatrix2(
        rho_gg=complex(ground_w + excited_w * a2),
        rho_ge=complex(coherence),
        rho_eg=complex(coherence),
        rho_ee=complex(excited_w * (1.0 - a2)),
    )


@dataclass(frozen=True)
class RatioRecord:
    """Full and reference randomness plus the relative overestimate."""

    h_full: float
    h_rwa: float
    ratio: float


def difference_ratio(
    config: PhysicalConfig, setup: ResonantSetup, kernels: KernelSet | None = None
) -> RatioRecord:
    """Relative randomness overestimate (h_rwa - h_full)/h_rwa.

    The full number comes from the second-order state of the complete mode
    set; the reference number from the second-order single-mode state.
    The reference is scored first: when its min-entropy is zero the ratio
    is undefined and UndefinedRatioError is raised without running the
    full calculation.
    """
    angle = rabi_angle(config, setup)
    h_rwa = min_entropy_optimal(purity(rwa_state_second_order(config.amplitude, angle)))
    if h_rwa == 0.0:
        raise UndefinedRatioError("reference min-entropy is zero; ratio undefined")
    h_full = certify(config, kernels=kernels).min_entropy_bits
    return RatioRecord(h_full=h_full, h_rwa=h_rwa, ratio=(h_rwa - h_full) / h_rwa)


def mode_amplitude_diagnostic(
    config: PhysicalConfig, setup: ResonantSetup, n_range
) -> list[tuple[int, float, float, float]]:
    """Window amplitudes |integral of e^{i(gap -+ omega_n)t}| per mode.

    Returns rows (n, omega_n, rotating, counter_rotating) where the
    rotating column uses detuning gap - omega_n and the counter-rotating
    column gap + omega_n. On resonance the rotating amplitude equals the
    window length exactly; every off-resonant amplitude is bounded by
    2/|detuning| independent of the window.
    """
    _check_resonant(config, setup)
    T = config.duration
    rows: list[tuple[int, float, float, float]] = []
    for n in n_range:
        if n < 1:
            raise ConfigError("mode numbers start at 1")
        # omega_n = n/m * gap exactly, for both cavity kinds
        omega_n = config.gap * (n / setup.mode_index)
        rows.append(
            (
                int(n),
                omega_n,
                _window_amp(config.gap - omega_n, T),
                _window_amp(config.gap + omega_n, T),
            )
        )
    return rows


def _window_amp(u: float, T: float) -> float:
    if u == 0.0:
        return T
    return abs(2.0 * math.sin(u * T / 2.0) / u)
