import math

import numpy as np
import pytest

from fieldrand.atom_state import (
    DensityMatrix2,
    NonphysicalStateError,
    PerturbationBreakdownError,
    SchmidtPair,
    evolve_perturbative,
    purity,
    schmidt_pair,
)
from fieldrand.kernels import KernelSet, compute_kernels
from fieldrand.params import FreeSpace, PhysicalConfig


def make_config(**overrides):
    base = dict(coupling=0.01, atom_size=0.001, gap=1.0, duration=1.0, amplitude=0.5)
    base.update(overrides)
    return PhysicalConfig(**base)


def zero_kernels(scenario=FreeSpace()):
    return KernelSet(
        x_pp=0j, x_mm=0j, j_pp=0j, j_mm=0j, j_pm=0j, j_mp=0j,
        scenario=scenario, error=0.0,
    )


def diag(a, b, off=0.0):
    return DensityMatrix2(
        rho_gg=complex(a), rho_ge=complex(off),
        rho_eg=complex(off).conjugate(), rho_ee=complex(b),
    )


class TestDensityMatrix2:
    def test_trace_and_array(self):
        rho = diag(0.75, 0.25, off=0.1)
        assert rho.trace == 1.0
        arr = rho.as_array()
        assert arr.shape == (2, 2)
        assert arr[1, 0] == arr[0, 1].conjugate()


class TestSchmidtPairType:
    def test_ordering_enforced(self):
        with pytest.raises(NonphysicalStateError):
            SchmidtPair(0.3, 0.7)

    def test_negative_rejected(self):
        with pytest.raises(NonphysicalStateError):
            SchmidtPair(1.1, -0.1)

    def test_sum_must_be_one(self):
        with pytest.raises(NonphysicalStateError):
            SchmidtPair(0.6, 0.3)


class TestEvolve:
    def test_zero_kernels_give_pure_projector(self):
        # identity evolution: the state is exactly the prepared projector
        a = 0.6
        rho = evolve_perturbative(make_config(amplitude=a), kernels=zero_kernels())
        b = math.sqrt(1.0 - a * a)
        assert rho.rho_gg == a * a
        assert rho.rho_ee == pytest.approx(b * b, abs=1e-15)
        assert rho.rho_ge == a * b
        assert purity(rho) == pytest.approx(1.0, abs=1e-15)

    def test_ground_state_structure(self):
        # a=1: diagonal entries pick up 2Re(X++) and J++, no coherence
        cfg = make_config(amplitude=1.0)
        ks = compute_kernels(cfg)
        rho = evolve_perturbative(cfg, kernels=ks)
        assert rho.rho_ge == 0.0
        assert rho.rho_gg.real == pytest.approx(1.0 + 2.0 * ks.x_pp.real, rel=1e-12)
        assert rho.rho_ee == pytest.approx(ks.j_pp, rel=1e-12)
        assert purity(rho) < 1.0

    def test_trace_is_one(self):
        for a in (0.0, 0.3, 1.0):
            rho = evolve_perturbative(make_config(amplitude=a, duration=1.7))
            assert abs(rho.trace - 1.0) < 1e-10

    def test_hermitian(self):
        rho = evolve_perturbative(make_config(amplitude=0.8))
        assert rho.rho_eg == rho.rho_ge.conjugate()

    def test_breakdown_raises(self):
        with pytest.raises(PerturbationBreakdownError):
            evolve_perturbative(make_config(coupling=0.2, duration=4.0))

    def test_kernels_computed_when_not_supplied(self):
        cfg = make_config()
        assert evolve_perturbative(cfg) == evolve_perturbative(
            cfg, kernels=compute_kernels(cfg)
        )


class TestPurity:
    def test_pure_state(self):
        assert purity(diag(1.0, 0.0)) == 1.0

    def test_maximally_mixed(self):
        assert purity(diag(0.5, 0.5)) == 0.5

    def test_worked_example(self):
        assert purity(diag(0.9, 0.1)) == pytest.approx(0.82)

    def test_off_diagonal_contributes_twice(self):
        assert purity(diag(0.5, 0.5, off=0.5)) == 1.0

    def test_capped_at_one(self):
        assert purity(diag(1.0, 0.0, off=0.2)) == 1.0


class TestSchmidtPairExtraction:
    def test_diagonal_pure(self):
        pair = schmidt_pair(diag(1.0, 0.0))
        assert (pair.lam0, pair.lam1) == (1.0, 0.0)

    def test_plus_projector(self):
        pair = schmidt_pair(diag(0.5, 0.5, off=0.5))
        assert pair.lam0 == pytest.approx(1.0, abs=1e-15)
        assert pair.lam1 == pytest.approx(0.0, abs=1e-15)

    def test_already_diagonal(self):
        pair = schmidt_pair(diag(0.75, 0.25))
        assert pair.lam0 == pytest.approx(0.75)
        assert pair.lam1 == pytest.approx(0.25)

    def test_reproduces_purity(self):
        rho = evolve_perturbative(make_config(amplitude=0.7))
        pair = schmidt_pair(rho)
        assert pair.lam0**2 + pair.lam1**2 == pytest.approx(purity(rho), abs=1e-12)

    def test_tiny_negative_clamped(self):
        eps = 1e-9
        pair = schmidt_pair(diag(1.0 + eps, -eps))
        assert pair.lam1 == 0.0
        assert pair.lam0 == 1.0

    def test_large_negative_rejected(self):
        with pytest.raises(NonphysicalStateError):
            schmidt_pair(diag(1.0 + 1e-6, -1e-6))


class TestScalingLaws:
    def test_purity_deficit_quadratic_in_coupling(self):
        # slope of log(1 - purity) against log(coupling) is 2 within 1%
        couplings = np.array([0.001, 0.002, 0.005, 0.01, 0.02])
        deficits = []
        for lam in couplings:
            rho = evolve_perturbative(make_config(coupling=float(lam)))
            deficits.append(1.0 - purity(rho))
        slope = np.polyfit(np.log(couplings), np.log(deficits), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.02)

    def test_larger_atom_keeps_more_purity(self):
        sigmas = [0.001, 0.01, 0.1, 0.5, 1.0]
        purities = [
            purity(evolve_perturbative(make_config(atom_size=s))) for s in sigmas
        ]
        assert all(b > a for a, b in zip(purities, purities[1:]))
