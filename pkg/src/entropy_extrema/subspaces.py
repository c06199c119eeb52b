"""Matrix subspaces, tangent directions and the SVD-aligned block form.

A :class:`Subspace` stores an orthonormal basis under ``<u, v> = Tr[u v^*]``
together with its scalar field. Over the reals, coefficients and orthogonal
complements are real; over the complex numbers they are complex, and the
real tangent directions at ``x`` are ``y`` and ``i y`` for each ``y`` in the
complement (``i x`` itself is excluded because ``xx^*`` does not see it).
"""

from dataclasses import dataclass, field as dc_field
from typing import List, NamedTuple

import numpy as np
from scipy.linalg import null_space

from .config import get_tolerances
from .entropy import hs_inner, hs_normsq
from .exceptions import (EmptyBasis, FieldMismatch, NotInSubspace,
                         ZeroMatrix)
from .spectral import dag, matrix_from_dict, matrix_to_dict, svd

MEMBERSHIP_TOL = 1e-9
DEPENDENCE_TOL = 1e-9


@dataclass(frozen=True)
class Subspace:
    basis: np.ndarray  # (k, m, n), orthonormal
    field: str = "complex"

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def ambient(self):
        return self.basis.shape[1:]

    def coordinates(self, x):
        c = np.einsum("kij,ij->k", np.conj(self.basis), x)
        return c.real if self.field == "real" else c

    def element(self, coeffs):
        return np.tensordot(np.asarray(coeffs), self.basis, axes=1)

    def project(self, x):
        return self.element(self.coordinates(x))

    def residual(self, x):
        return float(np.sqrt(hs_normsq(x - self.project(x))))

    def contains(self, x, tol=MEMBERSHIP_TOL):
        return self.residual(x) <= tol

    def gram(self):
        k = self.dim
        flat = self.basis.reshape(k, -1)
        return flat @ dag(flat)

    def random_unit(self, rng):
        """Uniformly random unit-norm element (Gaussian coefficients)."""
        c = rng.standard_normal(self.dim)
        if self.field == "complex":
            c = c + 1j * rng.standard_normal(self.dim)
        return self.element(c / np.linalg.norm(c))

    def to_dict(self):
        return {"ambient": list(self.ambient), "field": self.field,
                "basis": [matrix_to_dict(b) for b in self.basis]}

    @classmethod
    def from_dict(cls, d):
        """Parse the exchange format; the basis is re-orthonormalized."""
        field = d.get("field", "complex")
        mats = [matrix_from_dict(b) for b in d["basis"]]
        ambient = tuple(d.get("ambient", mats[0].shape if mats else ()))
        for m in mats:
            if m.shape != ambient:
                raise ValueError(f"basis matrix of shape {m.shape}, ambient is {ambient}")
        return orthonormalize(mats, field)


def orthonormalize(raw, field=None):
    """Gram-Schmidt with one re-orthogonalization pass.

    Matrices whose residual after projection is below ``1e-9`` times their
    norm are dropped as linearly dependent.
    """
    raw = [np.asarray(r) for r in raw]
    if not raw:
        raise EmptyBasis("need at least one matrix")
    if field is None:
        field = "complex" if any(np.iscomplexobj(r) for r in raw) else "real"
    if field not in ("real", "complex"):
        raise ValueError(f"unknown field {field!r}")
    if field == "real":
        if any(np.iscomplexobj(r) and np.any(r.imag != 0) for r in raw):
            raise FieldMismatch("complex entries in a real subspace")
        raw = [np.real(r).astype(float) for r in raw]
    else:
        raw = [r.astype(complex) for r in raw]
    shape = raw[0].shape
    basis = []
    for r in raw:
        if r.shape != shape:
            raise ValueError("all matrices must share one shape")
        v = r.copy()
        scale = np.sqrt(hs_normsq(r))
        for _ in range(2):
            for b in basis:
                v = v - hs_inner(v, b) * b
        nrm = np.sqrt(hs_normsq(v))
        if nrm > DEPENDENCE_TOL * max(scale, 1.0):
            basis.append(v / nrm)
    if not basis:
        raise EmptyBasis("all matrices are zero")
    return Subspace(np.array(basis), field)


def _require_member(K, x):
    if x.shape != tuple(K.ambient):
        raise NotInSubspace(f"point of shape {x.shape} in a subspace of {K.ambient}")
    res = K.residual(x)
    if res > MEMBERSHIP_TOL:
        raise NotInSubspace(f"projection residual {res:.3e} exceeds {MEMBERSHIP_TOL}")


def orthogonal_complement_at(K, x):
    """Orthonormal basis of ``{y in K : Tr[x y^*] = 0}`` (dimension ``dim K - 1``)."""
    x = np.asarray(x)
    _require_member(K, x)
    c = K.coordinates(x)
    if np.linalg.norm(c) == 0:
        raise ZeroMatrix("x is zero")
    if K.dim == 1:
        return []
    ns = null_space(np.conj(c)[None, :])
    if K.field == "real":
        ns = ns.real
    return [K.element(col) for col in ns.T]


def tangent_directions(K, x):
    """Real-linear basis of the tangent space at ``x``: the complement basis,
    and over the complex field also ``i y`` for each complement vector."""
    perp = orthogonal_complement_at(K, x)
    if K.field == "complex":
        return [d for y in perp for d in (y, 1j * y)]
    return perp


def random_tangent(K, x, rng):
    """Random unit direction in ``x^perp``."""
    perp = orthogonal_complement_at(K, x)
    if not perp:
        return None
    c = rng.standard_normal(len(perp))
    if K.field == "complex":
        c = c + 1j * rng.standard_normal(len(perp))
    c = c / np.linalg.norm(c)
    return np.tensordot(c, np.array(perp), axes=1)


def tensor_subspace(K1, K2):
    """``K1 (x) K2`` with basis ``{b_i (x) c_j}``."""
    if K1.field != K2.field:
        raise FieldMismatch(f"{K1.field} subspace with {K2.field} subspace")
    basis = np.array([np.kron(b, c) for b in K1.basis for c in K2.basis])
    return Subspace(basis, K1.field)


def tensor_complement_blocks(K1, x1, K2, x2):
    """The three blocks of ``(x1 (x) x2)^perp``:
    ``<x1> (x) x2^perp``, ``x1^perp (x) <x2>`` and ``x1^perp (x) x2^perp``."""
    p1 = orthogonal_complement_at(K1, x1)
    p2 = orthogonal_complement_at(K2, x2)
    return ([np.kron(x1, y2) for y2 in p2],
            [np.kron(y1, x2) for y1 in p1],
            [np.kron(y1, y2) for y1 in p1 for y2 in p2])


@dataclass
class CanonicalBlocks:
    """``U x V = [[x11, 0], [0, 0]]`` with ``x11 = diag(d_1 >= ... >= d_r > 0)``,
    and ``U y V`` split at ``r`` into ``y11, y12, y21, y22``."""

    r: int
    x11: np.ndarray
    y11: np.ndarray
    y12: np.ndarray
    y21: np.ndarray
    y22: np.ndarray
    U: np.ndarray
    V: np.ndarray

    def assembled(self):
        return np.block([[self.y11, self.y12], [self.y21, self.y22]])

    def original_y(self):
        return dag(self.U) @ self.assembled() @ dag(self.V)


def canonical_blocks(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    if hs_normsq(x) == 0:
        raise ZeroMatrix("canonical form of the zero matrix")
    left, s, right, r = svd(x)
    U, V = dag(left), right
    yt = U @ y @ V
    return CanonicalBlocks(r, np.diag(s[:r]), yt[:r, :r], yt[:r, r:],
                           yt[r:, :r], yt[r:, r:], U, V)


def second_derivative_finite(x, y):
    """Whether the second derivative of the entropy at ``x`` along ``y`` is
    finite: true iff the ``y22`` block vanishes (within ``ranktol``)."""
    blocks = canonical_blocks(x, y)
    if blocks.y22.size == 0:
        return True
    return bool(np.max(np.abs(blocks.y22)) <= get_tolerances().ranktol)


def max_abs(a):
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def commutator_norm(x, y):
    """``|| xx^* xy^* - xy^* xx^* ||_max``."""
    a = x @ dag(x)
    m = x @ dag(y)
    return max_abs(a @ m - m @ a)


def block_commutation(x, y):
    """Block-form equivalents of ``[xx^*, xy^*] = 0``: the size of ``y21`` and
    of ``[x11 x11^*, x11 y11^*]``."""
    b = canonical_blocks(x, y)
    a11 = b.x11 @ dag(b.x11)
    m11 = b.x11 @ dag(b.y11)
    return max_abs(b.y21), max_abs(a11 @ m11 - m11 @ a11)


class CommutativityWitness(NamedTuple):
    index: int
    commutator: float
    y21: float
    block_commutator: float


@dataclass
class CommutativityReport:
    holds: bool
    witnesses: List[CommutativityWitness] = dc_field(default_factory=list)
    directions: List[CommutativityWitness] = dc_field(default_factory=list)

    def to_dict(self):
        return {"holds": self.holds,
                "witnesses": [w._asdict() for w in self.witnesses],
                "directions": [w._asdict() for w in self.directions]}


def local_commutativity_check(K, x):
    """Test whether ``xx^*`` commutes with ``xy^*`` for every ``y`` in ``K``.

    By linearity it suffices to test a basis of ``x^perp`` (``y = x`` commutes
    trivially). Directions whose commutator exceeds ``comtol`` are returned
    as witnesses; every direction also carries the block-form diagnostics.
    """
    x = np.asarray(x)
    comtol = get_tolerances().comtol
    rows = []
    for i, y in enumerate(orthogonal_complement_at(K, x)):
        y21, blk = block_commutation(x, y)
        rows.append(CommutativityWitness(i, commutator_norm(x, y), y21, blk))
    bad = [w for w in rows if w.commutator > comtol]
    return CommutativityReport(not bad, bad, rows)
