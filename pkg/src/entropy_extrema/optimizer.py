"""Minimum (or maximum) entropy output of a subspace by projected gradient
descent on the unit sphere of its coefficient space.

Because the basis of a :class:`~entropy_extrema.subspaces.Subspace` is
orthonormal, the coefficient sphere is exactly the unit sphere of the
subspace. Over the complex field the coefficients are handled as a real
vector of twice the length.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .entropy import VON_NEUMANN, SpectralFunction, derivative_kernel
from .exceptions import EmptySubspace, FieldMismatch
from .spectral import matrix_to_dict
from .subspaces import tensor_subspace

STEP_FLOOR = 1e-12
STEP_CEIL = 1e3


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 2000
    step_init: float = 0.1
    grad_tol: float = 1e-9
    seed: int = 0
    f: SpectralFunction = VON_NEUMANN
    sense: str = "minimize"

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if not (self.step_init > 0 and self.grad_tol > 0):
            raise ValueError("step_init and grad_tol must be positive")
        if self.sense not in ("minimize", "maximize"):
            raise ValueError(f"sense must be minimize or maximize, got {self.sense!r}")

    def to_dict(self):
        return {"restarts": self.restarts, "max_iters": self.max_iters,
                "step_init": self.step_init, "grad_tol": self.grad_tol,
                "seed": self.seed, "f": self.f.label, "sense": self.sense}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "f" in d:
            d["f"] = SpectralFunction.parse(d["f"])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown optimizer settings: {sorted(unknown)}")
        return cls(**d)


@dataclass
class RestartRecord:
    restart: int
    final_value: float
    iterations: int
    converged: bool
    grad_norm: float
    trace: List[tuple] = field(default_factory=list, repr=False)  # (iter, value, grad_norm)

    def to_dict(self):
        return {"restart": self.restart, "final_value": self.final_value,
                "iterations": self.iterations, "converged": self.converged,
                "grad_norm": self.grad_norm}


@dataclass
class OptimizationResult:
    best_point: np.ndarray
    best_value: float
    per_restart: List[RestartRecord]
    gradient_norm: float
    best_restart: int
    config: OptimizerConfig = None

    def to_dict(self):
        return {"best_value": self.best_value, "gradient_norm": self.gradient_norm,
                "best_restart": self.best_restart,
                "best_point": matrix_to_dict(self.best_point),
                "per_restart": [r.to_dict() for r in self.per_restart],
                "config": self.config.to_dict() if self.config else None}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def traces_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["restart", "iter", "value", "grad_norm"])
        for r in self.per_restart:
            for it, val, gn in r.trace:
                w.writerow([r.restart, it, f"{val:.12g}", f"{gn:.12g}"])
        return buf.getvalue()


class _Problem:
    """Objective and Euclidean gradient in real coefficient coordinates."""

    def __init__(self, K, fspec, sign):
        self.basis = K.basis
        self.complex = K.field == "complex"
        self.fspec = fspec
        self.sign = sign

    def point(self, c):
        if self.complex:
            k = c.size // 2
            c = c[:k] + 1j * c[k:]
        return np.tensordot(c, self.basis, axes=1)

    def value(self, c):
        return self.sign * self.fspec.value(self.point(c))

    def gradient(self, c):
        x = self.point(c)
        kern = derivative_kernel(self.fspec, x)
        # D_{b_i} = 2 Re Tr[kern b_i^*], D_{i b_i} = 2 Im Tr[kern b_i^*]
        z = 2 * np.einsum("kij,ij->k", np.conj(self.basis), kern)
        g = np.concatenate([z.real, z.imag]) if self.complex else z.real
        g = self.sign * g
        return g - np.dot(g, c) * c


def _run_restart(prob, c, cfg, restart):
    eps = np.finfo(float).eps
    val = prob.value(c)
    g = prob.gradient(c)
    gn = float(np.linalg.norm(g))
    trace = [(0, prob.sign * val, gn)]
    step = cfg.step_init
    prev = None
    it = 0
    while gn > cfg.grad_tol and it < cfg.max_iters:
        if prev is not None:
            s, yk = c - prev[0], g - prev[1]
            sy = abs(float(np.dot(s, yk)))
            if sy > 0:
                step = min(max(float(np.dot(s, s)) / sy, STEP_FLOOR), STEP_CEIL)
        t = step
        accepted = False
        while t >= STEP_FLOOR:
            cn = c - t * g
            cn = cn / np.linalg.norm(cn)
            vn = prob.value(cn)
            # below roundoff in f, fall back on the gradient norm
            flat = abs(vn - val) <= 4 * eps * max(1.0, abs(val))
            if vn < val and not flat:
                accepted = True
            elif flat:
                gnew = prob.gradient(cn)
                accepted = np.linalg.norm(gnew) < gn
            if accepted:
                break
            t /= 2
        if not accepted:
            break
        it += 1
        prev = (c, g)
        c, val = cn, vn
        g = prob.gradient(c)
        gn = float(np.linalg.norm(g))
        trace.append((it, prob.sign * val, gn))
    return c, RestartRecord(restart, float(prob.sign * val), it, gn <= cfg.grad_tol, gn, trace)


def optimize_entropy(K, cfg=OptimizerConfig()):
    """Estimate ``min`` (or ``max``) of ``cfg.f`` over the unit sphere of ``K``.

    Restart ``r`` starts from a Gaussian coefficient vector drawn with seed
    ``cfg.seed + r``. The reported minimum is an upper bound on the true one.
    """
    if K is None or K.dim < 1:
        raise EmptySubspace("subspace has no basis")
    sign = 1.0 if cfg.sense == "minimize" else -1.0
    prob = _Problem(K, cfg.f, sign)
    n = 2 * K.dim if prob.complex else K.dim
    records, points = [], []
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + r)
        c = rng.standard_normal(n)
        c, rec = _run_restart(prob, c / np.linalg.norm(c), cfg, r)
        records.append(rec)
        points.append(prob.point(c))
    finals = np.array([sign * rec.final_value for rec in records])
    best = int(np.argmin(finals))  # first index wins ties
    return OptimizationResult(points[best], records[best].final_value, records,
                              records[best].grad_norm, best, cfg)


@dataclass
class GapReport:
    h1: float
    h2: float
    h12: float

    @property
    def gap(self):
        return self.h1 + self.h2 - self.h12

    def to_dict(self):
        return {"h1": self.h1, "h2": self.h2, "h12": self.h12, "gap": self.gap}


def additivity_gap(K1, K2, cfg=OptimizerConfig()):
    """``H(K1) + H(K2) - H(K1 (x) K2)`` from three optimizer runs.

    Each value is an upper bound, so the gap is only indicative; a positive
    gap beyond optimizer slack signals non-additivity.
    """
    if K1.field != K2.field:
        raise FieldMismatch(f"{K1.field} subspace with {K2.field} subspace")
    h1 = optimize_entropy(K1, cfg).best_value
    h2 = optimize_entropy(K2, cfg).best_value
    h12 = optimize_entropy(tensor_subspace(K1, K2), cfg).best_value
    return GapReport(h1, h2, h12)
