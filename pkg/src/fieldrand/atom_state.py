"""Reduced detector state to second order, its purity and spectrum."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .kernels import KernelSet, compute_kernels
from .params import FieldrandError, PhysicalConfig

__all__ = [
    "DensityMatrix2",
    "SchmidtPair",
    "PerturbationBreakdownError",
    "NonphysicalStateError",
    "evolve_perturbative",
    "purity",
    "schmidt_pair",
]

# second-order correction entries above this magnitude mean the expansion
# itself is no longer trustworthy
_BREAKDOWN_LIMIT = 0.1
_EIGENVALUE_FLOOR = -1e-8


class PerturbationBreakdownError(FieldrandError):
    """Second-order corrections too large for the truncated expansion."""


class NonphysicalStateError(FieldrandError):
    """An eigenvalue is negative beyond truncation noise."""


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 state in the {ground, excited} basis; row 0 is the ground state."""

    rho_gg: complex
    rho_ge: complex
    rho_eg: complex
    rho_ee: complex

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.rho_gg, self.rho_ge], [self.rho_eg, self.rho_ee]], dtype=complex
        )

    @property
    def trace(self) -> complex:
        return self.rho_gg + self.rho_ee


@dataclass(frozen=True)
class SchmidtPair:
    """Eigenvalue pair (lam0 >= lam1 >= 0, lam0 + lam1 = 1) of the reduced state."""

    lam0: float
    lam1: float

    def __post_init__(self) -> None:
        if not (self.lam0 >= self.lam1 >= 0.0):
            raise NonphysicalStateError("Schmidt values must satisfy lam0 >= lam1 >= 0")
        if abs(self.lam0 + self.lam1 - 1.0) > 1e-9:
            raise NonphysicalStateError("Schmidt values must sum to 1")


def evolve_perturbative(
    config: PhysicalConfig, kernels: KernelSet | None = None
) -> DensityMatrix2:
    """Assemble the second-order reduced state for the prepared superposition.

    With a the ground amplitude and b^2 = 1 - a^2, the corrections on top of
    the pure projector are b^2*j_mm + 2a^2*Re(x_pp) on the ground population,
    a^2*j_pp + 2b^2*Re(x_mm) on the excited population, and
    a*b*(j_mp + x_pp + conj(x_mm)) on the coherence. The trace stays 1
    automatically because 2Re(x_rr) = -j_rr at the integrand level; this is
    checked, not renormalized.

    Raises PerturbationBreakdownError when any correction entry exceeds 0.1
    in magnitude. ``kernels`` may be supplied to reuse a cached set.
    """
    if kernels is None:
        kernels = compute_kernels(config)
    a = config.amplitude
    ground_w = a * a
    excited_w = 1.0 - ground_w
    cross_w = a * math.sqrt(excited_w)

    corr_gg = excited_w * kernels.j_mm.real + 2.0 * ground_w * kernels.x_pp.real
    corr_ee = ground_w * kernels.j_pp.real + 2.0 * excited_w * kernels.x_mm.real
    corr_ge = cross_w * (kernels.j_mp + kernels.x_pp + kernels.x_mm.conjugate())
    worst = max(abs(corr_gg), abs(corr_ee), abs(corr_ge))
    if worst > _BREAKDOWN_LIMIT:
        raise PerturbationBreakdownError(
            f"second-order correction magnitude {worst:.3g} exceeds {_BREAKDOWN_LIMIT}; "
            "coupling too strong for the truncated expansion"
        )

    rho = DensityMatrix2(
        rho_gg=complex(ground_w + corr_gg),
        rho_ge=complex(cross_w + corr_ge),
        rho_eg=complex(cross_w + corr_ge).conjugate(),
        rho_ee=complex(excited_w + corr_ee),
    )
    if abs(rho.trace - 1.0) > 1e-10:
        raise NonphysicalStateError(f"state trace {rho.trace} deviates from 1")
    return rho


def purity(rho: DensityMatrix2) -> float:
    """Tr(rho^2) = |rho_gg|^2 + |rho_ee|^2 + 2|rho_ge|^2, capped at 1."""
    value = (
        abs(rho.rho_gg) ** 2 + abs(rho.rho_ee) ** 2 + 2.0 * abs(rho.rho_ge) ** 2
    )
    return min(float(value), 1.0)


def schmidt_pair(rho: DensityMatrix2) -> SchmidtPair:
    """Eigenvalues of the state, clamped against truncation noise.

    Values in [-1e-8, 0) are set to zero and the pair renormalized; anything
    below raises NonphysicalStateError.
    """
    ev = np.linalg.eigvalsh(rho.as_array())
    lo, hi = float(ev[0]), float(ev[1])
    if lo < _EIGENVALUE_FLOOR:
        raise NonphysicalStateError(
            f"eigenvalue {lo:.3e} below {_EIGENVALUE_FLOOR:.0e}; state not physical"
        )
    lo = max(lo, 0.0)
    total = lo + hi
    return SchmidtPair(lam0=hi / total, lam1=lo / total)
