"""Projected-gradient estimation of minimum entropy output."""

import json
import math

import numpy as np
import pytest

from entropy_extrema import (CRITICAL, VON_NEUMANN, OptimizerConfig, additivity_gap,
                             anticommuting_family, criticality_check, optimize_entropy,
                             orthogonal_subspace, orthonormalize, pnorm, vn_entropy)
from entropy_extrema.exceptions import FieldMismatch
from entropy_extrema.instances import random_matrix

FAST = OptimizerConfig(restarts=4)


class TestConfig:
    def test_defaults(self):
        c = OptimizerConfig()
        assert (c.restarts, c.max_iters, c.step_init, c.grad_tol, c.seed) == (32, 2000, 0.1, 1e-9, 0)
        assert c.f == VON_NEUMANN and c.sense == "minimize"

    def test_json_round_trip(self):
        c = OptimizerConfig(restarts=3, f=pnorm(3), sense="maximize", seed=7)
        assert OptimizerConfig.from_dict(json.loads(json.dumps(c.to_dict()))) == c

    @pytest.mark.parametrize("bad", [{"restarts": 0}, {"grad_tol": -1}, {"sense": "up"},
                                     {"colour": 1}])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            OptimizerConfig.from_dict(bad)


class TestOptimize:
    def test_orthogonal_subspace_flat(self):
        K = orthogonal_subspace(anticommuting_family(4, 4))
        res = optimize_entropy(K, FAST)
        for r in res.per_restart:
            assert r.final_value == pytest.approx(math.log(4), abs=1e-10)

    def test_full_matrix_space(self):
        K = orthonormalize([np.eye(2)[:, [i]] @ np.eye(2)[[j], :] for i in range(2) for j in range(2)],
                           "complex")
        assert optimize_entropy(K, FAST).best_value == pytest.approx(0, abs=1e-6)

    def test_diagonal_pencil(self):
        K = orthonormalize([np.eye(2), np.diag([1.0, -1.0])])
        res = optimize_entropy(K, FAST)
        assert res.best_value == pytest.approx(0, abs=1e-6)
        # grid oracle over the circle of unit real combinations
        th = np.linspace(0, 2 * np.pi, 2001)
        grid = min(vn_entropy(np.cos(t) * K.basis[0] + np.sin(t) * K.basis[1]) for t in th)
        assert res.best_value <= grid + 1e-9

    def test_upper_bound_and_reproducible_value(self):
        rng = np.random.default_rng(0)
        K = orthonormalize([random_matrix(rng, (2, 3)) for _ in range(2)])
        res = optimize_entropy(K, FAST)
        assert vn_entropy(res.best_point) == pytest.approx(res.best_value, abs=1e-10)
        assert res.best_value == min(r.final_value for r in res.per_restart)

    def test_maximize(self):
        rng = np.random.default_rng(1)
        K = orthonormalize([random_matrix(rng, (2, 3)) for _ in range(2)])
        lo = optimize_entropy(K, FAST)
        hi = optimize_entropy(K, OptimizerConfig(restarts=4, sense="maximize"))
        assert hi.best_value >= lo.best_value
        assert hi.best_value == max(r.final_value for r in hi.per_restart)

    def test_monotone_descent(self):
        rng = np.random.default_rng(2)
        K = orthonormalize([random_matrix(rng, (3, 3)) for _ in range(3)])
        for fspec in (VON_NEUMANN, pnorm(2)):
            res = optimize_entropy(K, OptimizerConfig(restarts=3, f=fspec))
            for r in res.per_restart:
                vals = np.array([v for _, v, _ in r.trace])
                # accepted steps never increase f beyond a few ulp
                assert np.all(np.diff(vals) <= 8 * np.finfo(float).eps * np.maximum(1, abs(vals[:-1])))

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        K = orthonormalize([random_matrix(rng, (2, 2)) for _ in range(3)])
        a = optimize_entropy(K, FAST)
        b = optimize_entropy(K, FAST)
        assert a.to_json() == b.to_json() and a.traces_csv() == b.traces_csv()
        c = optimize_entropy(K, OptimizerConfig(restarts=4, seed=1))
        assert c.per_restart[0].trace != a.per_restart[0].trace

    def test_converged_points_critical(self):
        rng = np.random.default_rng(4)
        for fspec in (VON_NEUMANN, pnorm(2), pnorm(3)):
            K = orthonormalize([random_matrix(rng, (2, 3)) for _ in range(3)])
            res = optimize_entropy(K, OptimizerConfig(restarts=2, f=fspec))
            assert res.per_restart[res.best_restart].converged
            rep = criticality_check(K, res.best_point, fspec, crittol=10 * res.config.grad_tol)
            assert rep.verdict == CRITICAL

    def test_traces_csv(self):
        K = orthonormalize([np.eye(2), np.diag([1.0, -1.0])])
        text = optimize_entropy(K, OptimizerConfig(restarts=2)).traces_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "restart,iter,value,grad_norm"
        assert {ln.split(",")[0] for ln in lines[1:]} == {"0", "1"}


class TestAdditivityGap:
    def test_trivial(self):
        I = orthonormalize([np.eye(2)])
        rep = additivity_gap(I, I, FAST)
        np.testing.assert_allclose([rep.h1, rep.h2, rep.h12], [math.log(2), math.log(2), math.log(4)])
        assert rep.gap == pytest.approx(0, abs=1e-12)

    def test_real_pair(self):
        K = orthogonal_subspace(anticommuting_family(2, 2))
        rep = additivity_gap(K, K, FAST)
        assert rep.gap >= math.log(2) - 1e-6

    def test_product_lower_bound(self):
        rng = np.random.default_rng(5)
        K1 = orthonormalize([random_matrix(rng, (2, 2)) for _ in range(2)])
        K2 = orthonormalize([random_matrix(rng, (2, 2)) for _ in range(2)])
        assert additivity_gap(K1, K2, FAST).gap >= -1e-6

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            additivity_gap(orthonormalize([np.eye(2)], "real"), orthonormalize([np.eye(2)], "complex"))
