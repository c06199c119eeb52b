"""Orthogonal subspaces from anticommuting skew-symmetric orthogonal
matrices, and a real subspace pair whose minimum entropy output is not
additive.

The families are tensor words in the real 2x2 generators::

    R = [[0, 1], [-1, 0]]    S = [[1, 0], [0, -1]]    T = [[0, 1], [1, 0]]

which pairwise anticommute, with ``R`` skew and ``S, T`` symmetric. A word
is skew iff it contains an odd number of ``R``; two words anticommute iff
they carry distinct non-identity letters in an odd number of positions.
"""

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import List

import numpy as np

from .entropy import vn_entropy
from .exceptions import DimensionTooSmall, InvalidFamily, InvariantViolation, OddDimension
from .optimizer import OptimizerConfig, optimize_entropy
from .spectral import matrix_to_dict
from .subspaces import Subspace, tensor_subspace

FAMILY_TOL = 1e-12

LETTERS = {
    "I": np.eye(2),
    "R": np.array([[0.0, 1.0], [-1.0, 0.0]]),
    "S": np.array([[1.0, 0.0], [0.0, -1.0]]),
    "T": np.array([[0.0, 1.0], [1.0, 0.0]]),
}

# maximal families on R^2, R^4 and R^8 (found by exhaustive clique search)
_BASE_WORDS = {
    1: ["R"],
    2: ["RI", "SR", "TR"],
    3: ["RII", "SIR", "SRS", "SRT", "TRI", "TSR", "TTR"],
}


def radon_hurwitz(m):
    """``rho(m) = 2^d + 8c`` for ``m = 2^(4c + d) * odd``, ``0 <= d < 4``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    b = (m & -m).bit_length() - 1
    c, d = divmod(b, 4)
    return 2 ** d + 8 * c


def word_matrix(word):
    return reduce(np.kron, (LETTERS[ch] for ch in word))


@dataclass
class OrthogonalFamily:
    """``k - 1`` real ``m x m`` skew-symmetric orthogonal matrices that
    pairwise anticommute."""

    m: int
    Q: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    @property
    def k(self):
        return len(self.Q) + 1

    def validate(self):
        eye = np.eye(self.m)
        for i, q in enumerate(self.Q):
            if q.shape != (self.m, self.m) or np.iscomplexobj(q):
                raise InvalidFamily(f"Q[{i}] must be a real {self.m}x{self.m} matrix")
            if np.max(np.abs(q @ q.T - eye)) > FAMILY_TOL:
                raise InvalidFamily(f"Q[{i}] is not orthogonal")
            if np.max(np.abs(q.T + q)) > FAMILY_TOL:
                raise InvalidFamily(f"Q[{i}] is not skew-symmetric")
            for j in range(i):
                if np.max(np.abs(q @ self.Q[j] + self.Q[j] @ q)) > FAMILY_TOL:
                    raise InvalidFamily(f"Q[{i}] and Q[{j}] do not anticommute")


def _power_of_two_family(b):
    """Maximal family (``rho(2^b) - 1`` matrices) on ``R^(2^b)``."""
    if b == 0:
        return []
    if b in _BASE_WORDS:
        return [word_matrix(w) for w in _BASE_WORDS[b]]
    # periodicity step: a family of size q on R^8 and one of size s on R^n
    # give q + 1 + s anticommuting skew matrices on R^(16 n)
    Q = _power_of_two_family(3)
    P = _power_of_two_family(b - 4)
    n = 2 ** (b - 4)
    In, I8 = np.eye(n), np.eye(8)
    R, S, T = LETTERS["R"], LETTERS["S"], LETTERS["T"]
    out = [np.kron(np.kron(q, S), In) for q in Q]
    out.append(np.kron(np.kron(I8, R), In))
    out += [np.kron(np.kron(I8, T), p) for p in P]
    return out


def anticommuting_family(m, k):
    """``k - 1`` anticommuting skew-symmetric orthogonal ``m x m`` matrices.

    Every ``k <= rho(m)`` is reachable. For ``k = 2`` the family is
    ``R (x) I_{m/2}``.

    Raises
    ------
    OddDimension
        If ``m`` is odd.
    DimensionTooSmall
        If ``k > rho(m)``.
    """
    if m < 2 or m % 2:
        raise OddDimension(f"m = {m} must be even and at least 2")
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > radon_hurwitz(m):
        raise DimensionTooSmall(f"k = {k} exceeds rho({m}) = {radon_hurwitz(m)}")
    if k <= 2:
        return OrthogonalFamily(m, [np.kron(LETTERS["R"], np.eye(m // 2))][: k - 1])
    b = (m & -m).bit_length() - 1
    odd = m >> b
    fam = _power_of_two_family(b)[: k - 1]
    return OrthogonalFamily(m, [np.kron(q, np.eye(odd)) for q in fam])


def orthogonal_subspace(family):
    """Real subspace ``span{I_m, Q_1, ...}`` with basis scaled by ``1/sqrt(m)``.

    Every unit element has all singular values ``1/sqrt(m)``.
    """
    family.validate()
    m = family.m
    basis = np.array([np.eye(m)] + list(family.Q)) / math.sqrt(m)
    gram = basis.reshape(len(basis), -1) @ basis.reshape(len(basis), -1).T
    if np.max(np.abs(gram - np.eye(len(basis)))) > FAMILY_TOL:
        raise InvalidFamily("family does not give an orthonormal basis")
    return Subspace(basis, "real")


@dataclass
class GapDemo:
    m1: int
    m2: int
    h1: float
    h2: float
    upper_bound_h12: float
    witness: np.ndarray
    optimizer_h12: float = None

    @property
    def gap(self):
        """Lower bound on ``H(K1) + H(K2) - H(K1 (x) K2)`` from the witness."""
        return self.h1 + self.h2 - self.upper_bound_h12

    def to_dict(self):
        return {"m1": self.m1, "m2": self.m2, "h1": self.h1, "h2": self.h2,
                "upper_bound_h12": self.upper_bound_h12,
                "optimizer_h12": self.optimizer_h12, "gap": self.gap,
                "witness": matrix_to_dict(self.witness)}


def real_gap_demo(m1, m2, run_optimizer=True, cfg=None):
    """Non-additivity of the minimum entropy output over the reals.

    ``K_i = span{I, Q_i}`` has ``H(K_i) = ln m_i`` while
    ``x = (Q_1 (x) Q_2 + I) / sqrt(2 m1 m2)`` lies in ``K_1 (x) K_2`` with
    ``m1 m2 / 2`` nonzero singular values ``sqrt(2 / (m1 m2))``, so
    ``H(K_1 (x) K_2) <= ln(m1 m2 / 2)``.
    """
    K1 = orthogonal_subspace(anticommuting_family(m1, 2))
    K2 = orthogonal_subspace(anticommuting_family(m2, 2))
    # every unit element of an orthogonal subspace has the same spectrum
    h1, h2 = vn_entropy(K1.basis[0]), vn_entropy(K2.basis[0])
    N = m1 * m2
    q1 = anticommuting_family(m1, 2).Q[0]
    q2 = anticommuting_family(m2, 2).Q[0]
    x = (np.kron(q1, q2) + np.eye(N)) / math.sqrt(2 * N)
    s = np.linalg.svd(x, compute_uv=False)
    if abs(np.sum(s ** 2) - 1) > 1e-12:
        raise InvariantViolation("witness is not normalized")
    expected = np.r_[np.full(N // 2, math.sqrt(2 / N)), np.zeros(N - N // 2)]
    if np.max(np.abs(s - expected)) > 1e-12:
        raise InvariantViolation("witness singular values are not as predicted")
    demo = GapDemo(m1, m2, h1, h2, vn_entropy(x), x)
    if run_optimizer:
        cfg = cfg or OptimizerConfig()
        demo.optimizer_h12 = optimize_entropy(tensor_subspace(K1, K2), cfg).best_value
    return demo
