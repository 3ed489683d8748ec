"""Second-order interaction kernels for a sharply switched detector window.

The reduced detector state after an interaction window of length T is fixed
by six complex numbers. Four of them come from time-ordered double integrals
(the X family) and from factorized double integrals (the J family), each
weighted over field modes. With the window sharp on [0, T], both time
integrals collapse to closed forms in the detuning u between a mode frequency
and the detector gap:

* time-ordered bracket:  T/(iu) - (exp(-iuT) - 1)/u^2
* factorized same-sign:  4 sin^2(uT/2)/u^2
* factorized cross term: (1 + exp(+-2i*gap*T) - 2 cos(kT) exp(+-i*gap*T))
                         / (k^2 - gap^2)

All three have removable singularities that are evaluated by series or
limit branches below a small-argument threshold.

Mode weighting by scenario (unit coupling; the coupling squared multiplies
at the end, with an overall minus sign on the X family):

* free space:  integral over k in (0, cutoff/atom_size] of k/(2*pi) * profile_ft(k)^2
* periodic:    sum over k_n = 2*pi*n/length of (k_n/length) * profile_ft(k_n)^2
* dirichlet:   sum over k_n = pi*n/length of (k_n/length) * profile_ft(k_n)^2
               * sin^2(k_n * position)

The free-space integral is oscillatory with wavelength 2*pi/T in k and has
a resonance-shaped (but removable) feature at k = gap, so the integrator
splits panels there and keeps initial panels a fraction of the oscillation
wavelength. A Gauss-Legendre 7/15 pair supplies the error estimate; panels
are refined in batches until the summed estimate is below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .params import (
    ConfigError,
    Dirichlet,
    FieldrandError,
    FreeSpace,
    Periodic,
    PhysicalConfig,
    Scenario,
    profile_ft,
)

__all__ = [
    "KernelSet",
    "KernelConvergenceError",
    "ordered_time_factor",
    "same_sign_J_factor",
    "cross_J_factor",
    "compute_kernels",
    "kernel_convergence_probe",
]

# below this value of |u|*T the closed forms cancel catastrophically
_SMALL_PHASE = 1e-4
# relative half-width of the cross-term limit branch around k = gap
_CROSS_LIMIT_REL = 1e-8
# absolute error budget per kernel after coupling^2 scaling
_ABS_TOL_SCALED = 1e-12


class KernelConvergenceError(FieldrandError):
    """The quadrature error estimate stayed above tolerance."""


@dataclass(frozen=True)
class KernelSet:
    """The six kernel values for one configuration plus an error estimate.

    ``j_pp`` and ``j_mm`` are nonnegative reals stored as complex with zero
    imaginary part; ``j_mp`` is exactly the conjugate of ``j_pm``. The
    invariants 2*Re(x_pp) + j_pp = 0 and 2*Re(x_mm) + j_mm = 0 hold to the
    quadrature tolerance because both members of each pair are accumulated
    on identical nodes.
    """

    x_pp: complex
    x_mm: complex
    j_pp: complex
    j_mm: complex
    j_pm: complex
    j_mp: complex
    scenario: Scenario
    error: float

    def as_tuple(self) -> tuple[complex, complex, complex, complex, complex, complex]:
        return (self.x_pp, self.x_mm, self.j_pp, self.j_mm, self.j_pm, self.j_mp)


def ordered_time_factor(u, duration: float):
    """Time-ordered window bracket T/(iu) - (exp(-iuT) - 1)/u^2.

    For |u|*duration below 1e-4 the series
    T^2/2 - i u T^3/6 - u^2 T^4/24 replaces the closed form; its truncation
    error there is below 1e-13 relative. Vectorized over ``u``.
    """
    u = np.asarray(u, dtype=float)
    T = float(duration)
    small = np.abs(u) * T <= _SMALL_PHASE
    safe = np.where(small, 1.0, u)
    closed = T / (1j * safe) - (np.exp(-1j * safe * T) - 1.0) / safe**2
    series = T * T / 2.0 - 1j * u * T**3 / 6.0 - u * u * T**4 / 24.0
    out = np.where(small, series, closed)
    return out if out.ndim else complex(out)


def same_sign_J_factor(u, duration: float):
    """Factorized window factor 4 sin^2(uT/2)/u^2 with limit T^2 at u = 0."""
    u = np.asarray(u, dtype=float)
    T = float(duration)
    small = np.abs(u) * T <= _SMALL_PHASE
    safe = np.where(small, 1.0, u)
    s = np.sin(safe * T / 2.0)
    closed = 4.0 * s * s / (safe * safe)
    series = T * T * (1.0 - (u * T) ** 2 / 12.0)
    out = np.where(small, series, closed)
    return out if out.ndim else float(out)


def cross_J_factor(k, gap: float, duration: float, sign: int):
    """Cross window factor for detunings of opposite sign.

    Returns (1 + e^{s 2i gap T} - 2 cos(kT) e^{s i gap T})/(k^2 - gap^2)
    with s = +1 or -1. Within 1e-8 relative of k = gap the removable
    singularity is replaced by its limit T sin(gap T) e^{s i gap T}/gap.
    Vectorized over ``k``.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    k = np.asarray(k, dtype=float)
    T = float(duration)
    s = float(sign)
    small = np.abs(k - gap) <= _CROSS_LIMIT_REL * gap
    safe = np.where(small, 2.0 * gap, k)
    phase = np.exp(1j * s * gap * T)
    bracket = 1.0 + np.exp(2j * s * gap * T) - 2.0 * np.cos(safe * T) * phase
    closed = bracket / (safe * safe - gap * gap)
    limit = T * np.sin(gap * T) * phase / gap
    out = np.where(small, limit, closed)
    return out if out.ndim else complex(out)


def _integrand_columns(k: np.ndarray, weight: np.ndarray, gap: float, T: float) -> np.ndarray:
    """Stack the five independent unit-coupling integrands as columns.

    Column order: x_pp, x_mm, j_pp, j_mm, j_pm (j_mp is the conjugate of
    j_pm and is never integrated separately). The sign conventions
    (minus on X, plus on J) are applied later with the coupling.
    """
    cols = np.empty((k.size, 5), dtype=complex)
    cols[:, 0] = weight * ordered_time_factor(k + gap, T)
    cols[:, 1] = weight * ordered_time_factor(k - gap, T)
    cols[:, 2] = weight * same_sign_J_factor(k + gap, T)
    cols[:, 3] = weight * same_sign_J_factor(k - gap, T)
    cols[:, 4] = weight * cross_J_factor(k, gap, T, +1)
    return cols


# Gauss-Legendre node/weight pairs for the embedded 7/15 error estimate.
_GL_LO = np.polynomial.legendre.leggauss(7)
_GL_HI = np.polynomial.legendre.leggauss(15)


def _panel_eval(f, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integrate f over each [lo_i, hi_i]; return values and error estimates."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x_lo = (mid[:, None] + half[:, None] * _GL_LO[0][None, :]).ravel()
    x_hi = (mid[:, None] + half[:, None] * _GL_HI[0][None, :]).ravel()
    f_lo = f(x_lo).reshape(lo.size, _GL_LO[0].size, -1)
    f_hi = f(x_hi).reshape(lo.size, _GL_HI[0].size, -1)
    val_lo = half[:, None] * np.einsum("j,pjc->pc", _GL_LO[1], f_lo)
    val_hi = half[:, None] * np.einsum("j,pjc->pc", _GL_HI[1], f_hi)
    err = np.abs(val_hi - val_lo).max(axis=1)
    return val_hi, err


def _adaptive_integrate(
    f,
    lo: float,
    hi: float,
    breakpoints: tuple[float, ...],
    panel_width: float | None,
    rel_tol: float = 1e-11,
    abs_tol: float = 1e-15,
    max_panels: int = 40000,
) -> tuple[np.ndarray, float]:
    """Vectorized adaptive panel integration of a columns-valued integrand.

    Deterministic: refinement decisions depend only on the panel set, and the
    final accumulation runs in ascending panel order.
    """
    edges = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    segments = []
    for a, b in zip(edges[:-1], edges[1:]):
        n = 1
        if panel_width is not None and panel_width > 0:
            n = min(int(np.ceil((b - a) / panel_width)), 20000)
            n = max(n, 1)
        pts = np.linspace(a, b, n + 1)
        segments.append(np.stack([pts[:-1], pts[1:]], axis=1))
    panels = np.concatenate(segments, axis=0)
    values, errors = _panel_eval(f, panels[:, 0], panels[:, 1])

    for _ in range(60):
        total = values.sum(axis=0)
        tol = max(abs_tol, rel_tol * float(np.abs(total).max()))
        if errors.sum() <= tol or panels.shape[0] >= max_panels:
            break
        threshold = tol / (2.0 * panels.shape[0])
        bad = errors > threshold
        if not bad.any():
            break
        a, b = panels[bad, 0], panels[bad, 1]
        mid = 0.5 * (a + b)
        fresh = np.concatenate(
            [np.stack([a, mid], axis=1), np.stack([mid, b], axis=1)], axis=0
        )
        new_values, new_errors = _panel_eval(f, fresh[:, 0], fresh[:, 1])
        panels = np.concatenate([panels[~bad], fresh], axis=0)
        values = np.concatenate([values[~bad], new_values], axis=0)
        errors = np.concatenate([errors[~bad], new_errors], axis=0)

    order = np.argsort(panels[:, 0], kind="stable")
    return values[order].sum(axis=0), float(errors.sum())


def _unit_kernels_free(atom_size: float, gap: float, T: float, cutoff: float):
    k_max = cutoff / atom_size
    def f(k: np.ndarray) -> np.ndarray:
        weight = (k / (2.0 * np.pi)) * profile_ft(k, atom_size) ** 2
        return _integrand_columns(k, weight, gap, T)

    breakpoints: tuple[float, ...] = (gap,)
    width = None
    if T > 0:
        # resolve the oscillation wavelength 2*pi/T and isolate the
        # resonance-adjacent region around k = gap
        breakpoints = (gap, gap - 2.0 * np.pi / T, gap + 2.0 * np.pi / T)
        width = np.pi / (2.0 * T)
    return _adaptive_integrate(f, 0.0, k_max, breakpoints, width)


def _unit_kernels_modes(
    atom_size: float, gap: float, T: float, cutoff: float, spacing: float, scen: Scenario
):
    k_max = cutoff / atom_size
    count = int(np.floor(k_max / spacing + 1e-12))
    if count < 1:
        return np.zeros(5, dtype=complex), 0.0
    total = np.zeros(5, dtype=complex)
    last = 0.0
    block = 500_000
    for start in range(1, count + 1, block):
        n = np.arange(start, min(start + block, count + 1))
        k = n * spacing
        weight = (k / scen.length) * profile_ft(k, atom_size) ** 2
        if isinstance(scen, Dirichlet):
            weight = weight * np.sin(k * scen.position) ** 2
        cols = _integrand_columns(k, weight, gap, T)
        total += cols.sum(axis=0)
        last = float(np.abs(cols[-1]).max())
    return total, last


def _unit_kernels(
    atom_size: float, gap: float, T: float, scen: Scenario, cutoff: float
) -> tuple[np.ndarray, float]:
    """Unit-coupling kernel columns (x_pp, x_mm, j_pp, j_mm, j_pm) and error."""
    if isinstance(scen, FreeSpace):
        return _unit_kernels_free(atom_size, gap, T, cutoff)
    if isinstance(scen, Periodic):
        return _unit_kernels_modes(atom_size, gap, T, cutoff, 2.0 * np.pi / scen.length, scen)
    return _unit_kernels_modes(atom_size, gap, T, cutoff, np.pi / scen.length, scen)


def kernels_from_unit(config: PhysicalConfig, columns: np.ndarray, unit_error: float) -> KernelSet:
    """Scale unit-coupling columns by the squared coupling into a KernelSet."""
    lam2 = config.coupling * config.coupling
    scaled_error = lam2 * unit_error
    if scaled_error > _ABS_TOL_SCALED:
        raise KernelConvergenceError(
            f"kernel error estimate {scaled_error:.3e} exceeds {_ABS_TOL_SCALED:.0e}; "
            "parameter regime outside quadrature validity"
        )
    x_pp, x_mm, j_pp, j_mm, j_pm = (lam2 * c for c in columns)
    return KernelSet(
        x_pp=-x_pp,
        x_mm=-x_mm,
        j_pp=j_pp,
        j_mm=j_mm,
        j_pm=j_pm,
        j_mp=j_pm.conjugate(),
        scenario=config.scenario,
        error=scaled_error,
    )


def compute_kernels(config: PhysicalConfig) -> KernelSet:
    """Evaluate the six kernels for one validated configuration.

    The X family carries the overall minus sign, the J family the plus sign,
    and every kernel scales exactly with the square of the coupling (the
    coupling enters nowhere else). The error field reports the quadrature
    residual (free space) or the magnitude of the last included mode term
    (cavities), scaled by the squared coupling.
    """
    columns, err = _unit_kernels(
        config.atom_size, config.gap, config.duration, config.scenario, config.cutoff
    )
    return kernels_from_unit(config, columns, err)


def kernel_convergence_probe(
    config: PhysicalConfig, cutoffs: list[float]
) -> list[tuple[float, KernelSet]]:
    """Recompute the kernels at each cutoff (ascending) for convergence checks."""
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ConfigError("cutoffs must be strictly increasing")
    return [(c, compute_kernels(replace(config, cutoff=c))) for c in cutoffs]
