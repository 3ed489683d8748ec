"""Certified randomness of a single projective measurement on the detector.

Two independent routes to the same number:

1. ``min_entropy_optimal`` evaluates the closed form
   H = -log2(1/2 + sqrt((1 - purity)/2)), the optimum over all projective
   measurements on the detector.
2. ``optimize_measurement`` searches measurement bases explicitly. For each
   basis it builds the two (unnormalized) conditional states the rest of the
   field would hold for either outcome and applies the two-state
   distinguishability bound P = 1/2 + 1/2*sqrt(1 - 4|<e0|e1>|^2). A coarse
   grid plus a shrinking pattern search refines the best basis.

Route 2 never consults route 1; their agreement is a meaningful check.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .atom_state import SchmidtPair, evolve_perturbative, purity, schmidt_pair
from .kernels import KernelSet
from .params import ConfigError, FieldrandError, PhysicalConfig

__all__ = [
    "EntropyDomainError",
    "MeasurementBasis",
    "RandomnessReport",
    "min_entropy_optimal",
    "helstrom_min_entropy",
    "optimize_measurement",
    "certify",
]

_PURITY_SLACK = 1e-12


class EntropyDomainError(FieldrandError):
    """Purity outside [1/2, 1] beyond the clamping tolerance."""


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective basis |m0> = cos(theta)|0> + e^{i phi} sin(theta)|1>.

    theta in [0, pi/2], phi in [0, 2*pi); |m1> is the orthogonal complement.
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ConfigError("theta must lie in [0, pi/2]")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ConfigError("phi must lie in [0, 2*pi)")


@dataclass(frozen=True)
class RandomnessReport:
    """Outcome of a certification: guessing probability and min-entropy."""

    guessing_probability: float
    min_entropy_bits: float
    purity: float
    optimal_basis: MeasurementBasis | None = None
    schmidt: SchmidtPair | None = None


def min_entropy_optimal(state_purity: float) -> float:
    """Min-entropy in bits of the optimally measured state, from its purity.

    Monotone increasing on [1/2, 1]; 1/2 maps to 0 bits, 1 maps to 1 bit.
    Values straying beyond the interval by more than 1e-12 raise.
    """
    if not (0.5 - _PURITY_SLACK) <= state_purity <= (1.0 + _PURITY_SLACK):
        raise EntropyDomainError(f"purity {state_purity} outside [1/2, 1]")
    p = min(max(state_purity, 0.5), 1.0)
    guess = 0.5 + math.sqrt((1.0 - p) / 2.0)
    return -math.log2(guess)


def _guessing_probability(schmidt: SchmidtPair, theta, phi):
    """Adversary guessing probability for an explicit measurement basis.

    Builds the unnormalized conditional field states
    e0 = (sqrt(lam0) cos(theta), sqrt(lam1) e^{-i phi} sin(theta)) and
    e1 = (sqrt(lam0) sin(theta), -sqrt(lam1) e^{-i phi} cos(theta)) in the
    Schmidt basis, then applies the binary distinguishability bound.
    Vectorized over theta/phi arrays.
    """
    r0 = math.sqrt(schmidt.lam0)
    r1 = math.sqrt(schmidt.lam1)
    ct, st = np.cos(theta), np.sin(theta)
    rot = np.exp(-1j * np.asarray(phi))
    e0 = (r0 * ct, r1 * rot * st)
    e1 = (r0 * st, -r1 * rot * ct)
    overlap = np.conj(e0[0]) * e1[0] + np.conj(e0[1]) * e1[1]
    inside = 1.0 - 4.0 * np.abs(overlap) ** 2
    return 0.5 + 0.5 * np.sqrt(np.maximum(inside, 0.0))


def helstrom_min_entropy(schmidt: SchmidtPair, basis: MeasurementBasis) -> RandomnessReport:
    """Randomness of one fixed basis against the optimal field measurement."""
    guess = float(_guessing_probability(schmidt, basis.theta, basis.phi))
    state_purity = schmidt.lam0**2 + schmidt.lam1**2
    return RandomnessReport(
        guessing_probability=guess,
        min_entropy_bits=-math.log2(guess),
        purity=state_purity,
        optimal_basis=basis,
        schmidt=schmidt,
    )


def optimize_measurement(schmidt: SchmidtPair, grid_points: int = 64) -> RandomnessReport:
    """Best basis by exhaustive grid plus shrinking pattern search.

    ``grid_points`` is the resolution per angle (at least 64). The pattern
    search runs 40 iterations with step shrink 0.7 from the grid spacing,
    enough to place the optimum to about 1e-8 in angle.
    """
    if grid_points < 64:
        raise ConfigError("grid resolution must be at least 64 points per angle")
    thetas = np.linspace(0.0, math.pi / 2, grid_points)
    phis = np.linspace(0.0, 2.0 * math.pi, grid_points, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    guesses = _guessing_probability(schmidt, tg, pg)
    flat = int(np.argmin(guesses))
    best_theta = float(tg.ravel()[flat])
    best_phi = float(pg.ravel()[flat])
    best = float(guesses.ravel()[flat])

    step = float(thetas[1] - thetas[0])
    for _ in range(40):
        for dt, dp in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            theta = min(max(best_theta + dt, 0.0), math.pi / 2)
            phi = (best_phi + dp) % (2.0 * math.pi)
            cand = float(_guessing_probability(schmidt, theta, phi))
            if cand < best:
                best, best_theta, best_phi = cand, theta, phi
        # unconditional shrink: the grid start is within one spacing of the
        # optimum, and the geometric sum of steps covers that comfortably
        step *= 0.7
    return RandomnessReport(
        guessing_probability=best,
        min_entropy_bits=-math.log2(best),
        purity=schmidt.lam0**2 + schmidt.lam1**2,
        optimal_basis=MeasurementBasis(theta=best_theta, phi=best_phi),
        schmidt=schmidt,
    )


def certify(config: PhysicalConfig, kernels: KernelSet | None = None) -> RandomnessReport:
    """Full pipeline: evolve the state, then score it with the closed form.

    The report carries the Schmidt pair so callers can rerun the explicit
    basis search as an independent cross-check. A zero-length window leaves
    the product state untouched and certifies exactly one bit.
    """
    if config.duration == 0.0:
        return RandomnessReport(
            guessing_probability=0.5,
            min_entropy_bits=1.0,
            purity=1.0,
            schmidt=SchmidtPair(1.0, 0.0),
        )
    rho = evolve_perturbative(config, kernels=kernels)
    p = purity(rho)
    bits = min_entropy_optimal(p)
    return RandomnessReport(
        guessing_probability=0.5 + math.sqrt((1.0 - p) / 2.0),
        min_entropy_bits=bits,
        purity=p,
        schmidt=schmidt_pair(rho),
    )
