"""Second-order entropy expansion, the necessary condition and eigenvalue
perturbation."""

import math

import numpy as np
import pytest

from entropy_extrema import (affine_expansion_check, density_entropy,
                             eigenvalue_perturbation_check, necessary_condition, normalize)
from entropy_extrema.entropy import hs_inner
from entropy_extrema.exceptions import DegenerateSpectrum, NotFullRank, NotOrthogonal, NotPSD
from entropy_extrema.instances import orthogonal_unit, random_matrix


def full_rank_pair(rng, n=3):
    x = normalize(random_matrix(rng, (n, n)))
    y = random_matrix(rng, (n, n))
    y = normalize(y - np.real(hs_inner(y, x)) * x)
    return x, y


def random_hermitian(rng, n):
    a = random_matrix(rng, (n, n))
    return (a + a.conj().T) / 2


class TestAffineExpansion:
    def test_cubic_scaling(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            x, y = full_rank_pair(rng)
            r = [affine_expansion_check(x, y, e) for e in (1e-2, 5e-3)]
            assert 6 <= r[0] / r[1] <= 10

    def test_asymptotic_regime(self):
        # at eps = 1e-2 a few Gaussian instances are still pre-asymptotic (small
        # eigenvalues of xx^*) or have a nearly vanishing cubic coefficient; at
        # eps = 1e-3 the ratio is near 8 unless the residual is at roundoff level
        rng = np.random.default_rng(800)
        coarse = fine = 0
        for _ in range(100):
            x = normalize(random_matrix(rng, (3, 3)))
            y = orthogonal_unit(rng, x)
            r = [affine_expansion_check(x, y, e) for e in (1e-2, 5e-3, 1e-3, 5e-4)]
            coarse += not 6 <= r[0] / r[1] <= 10
            fine += not (6 <= r[2] / r[3] <= 10 or r[2] < 1e-12)
        assert coarse > 0 and fine == 0

    def test_phase_direction(self):
        rng = np.random.default_rng(1)
        x = normalize(random_matrix(rng, (3, 3)))
        assert affine_expansion_check(x, 1j * x, 1e-3) <= 1e-12

    def test_diagonal_scalar_oracle(self):
        # simultaneously diagonal: everything reduces to scalar expansions
        lam = np.array([0.5, 0.3, 0.2])
        x = np.diag(np.sqrt(lam))
        e = np.array([0.3, -0.5, 0.2])
        e = e - np.dot(e, np.sqrt(lam)) * np.sqrt(lam)
        e = e / np.linalg.norm(e)
        y = np.diag(e)
        eps = 1e-3
        p = (np.sqrt(lam) + eps * e) ** 2
        p = p / p.sum()
        a1 = lam + 2 * eps * np.sqrt(lam) * e
        shannon = lambda q: -np.sum(q * np.log(q))
        expected = abs(shannon(p) - shannon(a1) - eps ** 2 * np.sum((lam - e ** 2) * np.log(lam)))
        assert affine_expansion_check(x, y, eps) == pytest.approx(expected, abs=1e-12)

    def test_preconditions(self):
        with pytest.raises(NotFullRank):
            affine_expansion_check(np.diag([1.0, 0]), np.array([[0, 1.0], [0, 0]]), 1e-2)
        x = np.diag([np.sqrt(0.99), 0.1])
        with pytest.raises(NotPSD):
            affine_expansion_check(x, np.diag([0.1, -np.sqrt(0.99)]), 0.5)
        x = np.eye(2) / np.sqrt(2)
        with pytest.raises(NotOrthogonal):
            affine_expansion_check(x, x, 1e-2)


class TestNecessaryCondition:
    def test_self(self):
        rng = np.random.default_rng(2)
        x = normalize(random_matrix(rng, (3, 3)))
        out = necessary_condition(x, x)
        assert abs(out["value"]) <= 1e-12 and out["identity_residual"] <= 1e-12

    def test_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            x, y = full_rank_pair(rng)
            assert necessary_condition(x, y)["identity_residual"] <= 1e-9

    def test_flat_boundary(self):
        out = necessary_condition(np.eye(2) / np.sqrt(2), np.diag([1.0, -1.0]) / np.sqrt(2))
        assert out["value"] == pytest.approx(0, abs=1e-15)

    def test_positive_at_local_minimum(self):
        # full-rank certified-type instance: x = diag(d), y moves weight to small eigenvalues
        x = np.diag(np.sqrt([0.9, 0.1]))
        y = np.array([[0, 0], [0, 1.0]]) * 1j
        y = normalize(y - hs_inner(y, x) * x)
        assert necessary_condition(x, y)["value"] > 0

    def test_rank_deficient(self):
        with pytest.raises(NotFullRank):
            necessary_condition(np.diag([1.0, 0]), np.diag([0, 1.0]))


class TestEigenvaluePerturbation:
    def test_zero_second_order(self):
        rng = np.random.default_rng(4)
        A, B = random_hermitian(rng, 3), random_hermitian(rng, 3)
        rep = eigenvalue_perturbation_check(A, B, np.zeros((3, 3)))
        assert rep.exact

    def test_commuting(self):
        A, B, C = np.diag([3.0, 2, 1]), np.diag([1.0, -1, 0.5]), np.diag([0.2, 0.1, -0.3])
        rep = eigenvalue_perturbation_check(A, B, C)
        assert rep.exact

    def test_cubic_scaling(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            A = random_hermitian(rng, 3)
            rep = eigenvalue_perturbation_check(A, random_hermitian(rng, 3), random_hermitian(rng, 3))
            assert rep.cubic, rep.ratios

    def test_degenerate(self):
        rep = eigenvalue_perturbation_check(np.eye(2), np.diag([1.0, 0]), np.eye(2))
        assert rep.skipped and "gap" in rep.reason and not rep.cubic
        with pytest.raises(DegenerateSpectrum):
            eigenvalue_perturbation_check(np.eye(2), np.eye(2), np.eye(2), raise_on_degenerate=True)

    def test_density_second_order(self):
        # the entropy expansion uses the same eps^2 diagonal correction
        lam = np.array([0.6, 0.3, 0.1])
        A = np.diag(lam)
        C = np.diag([0.0, 0.1, -0.1])
        eps = 1e-3
        d = density_entropy(A + eps ** 2 * C) - density_entropy(A)
        assert d == pytest.approx(-eps ** 2 * np.sum(np.diag(C) * (1 + np.log(lam))), rel=1e-5)
        assert math.isfinite(d)
