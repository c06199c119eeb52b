"""Random problem instances with known structure, for tests and demos."""

import numpy as np

from .certificates import (STRONG_LOCAL_MAX, STRONG_LOCAL_MIN, criticality_check,
                           two_norm_local_max_certificate, vn_local_min_certificate)
from .entropy import VON_NEUMANN, hs_inner, normalize
from .optimizer import OptimizerConfig, optimize_entropy
from .subspaces import orthonormalize


def random_matrix(rng, shape, field="complex"):
    a = rng.standard_normal(shape)
    if field == "complex":
        a = a + 1j * rng.standard_normal(shape)
    return a


def orthogonal_unit(rng, x, field="complex"):
    """Random unit ``y`` with ``Tr[x y^*] = 0``."""
    y = random_matrix(rng, x.shape, field)
    y = y - hs_inner(y, x) / hs_inner(x, x) * x
    return normalize(y)


def commuting_pair(rng, n=None, rank=None, cols=None):
    """Unit ``x`` and unit ``y`` with ``Tr[x y^*] = 0`` such that ``xx^*``
    commutes with ``xy^*`` and the second entropy derivative is finite.

    ``x = [[D, 0], [0, 0]]`` with ``D`` positive diagonal of size ``rank``;
    ``y`` has a diagonal ``y11``, arbitrary ``y12``, and ``y21 = y22 = 0``.
    """
    n = int(rng.integers(2, 6)) if n is None else n
    rank = int(rng.integers(1, n + 1)) if rank is None else rank
    cols = n + int(rng.integers(0, 3)) if cols is None else cols
    x = np.zeros((n, cols), dtype=complex)
    x[np.arange(rank), np.arange(rank)] = rng.uniform(0.05, 1.0, rank)
    y = np.zeros_like(x)
    y[np.arange(rank), np.arange(rank)] = random_matrix(rng, rank)
    if cols > rank:
        y[:rank, rank:] = random_matrix(rng, (rank, cols - rank)) * rng.uniform(0, 1)
    x = normalize(x)
    y = y - hs_inner(y, x) * x
    if np.linalg.norm(y) < 1e-8:
        return commuting_pair(rng, n, rank, cols)
    return x, normalize(y)


def local_min_instance(rng, m=3, extra_cols=2, n_right=2, diag_dirs=True, field="complex"):
    """Point ``x = [D 0]`` and a subspace ``K`` in which ``x`` is a strong local
    minimum candidate satisfying local commutativity.

    ``K`` is spanned by ``x``, directions ``[0 F]`` whose rows live where the
    eigenvalues of ``xx^*`` are below ``exp(-H)``, and (optionally) the
    diagonal direction ``[E 0]`` keeping ``x`` critical.
    """
    d = np.sort(rng.uniform(0.01, 1.0, m))[::-1]
    d = d / np.linalg.norm(d)
    lam = d ** 2
    H = -np.sum(lam * np.log(lam))
    small = np.nonzero(-np.log(lam) > H + 0.05)[0]
    x = np.zeros((m, m + extra_cols))
    x[:, :m] = np.diag(d)
    mats = [x]
    for _ in range(n_right):
        y = np.zeros((m, m + extra_cols), dtype=complex if field == "complex" else float)
        y[np.ix_(small, np.arange(m, m + extra_cols))] = random_matrix(rng, (small.size, extra_cols), field)
        mats.append(y)
    if diag_dirs and m >= 3:
        # E diagonal with sum d_i e_i = 0 and sum d_i ln(d_i^2) e_i = 0
        cons = np.vstack([d, d * np.log(lam)])
        e = np.linalg.svd(cons)[2][-1]
        y = np.zeros((m, m + extra_cols))
        y[:, :m] = np.diag(e)
        mats.append(y)
    K = orthonormalize(mats, field)
    return K, x.astype(complex) if field == "complex" else x


def certified_local_min(rng, max_tries=50, **kwargs):
    """First :func:`local_min_instance` certified as a strong local minimum."""
    for _ in range(max_tries):
        K, x = local_min_instance(rng, **kwargs)
        if vn_local_min_certificate(K, x, samples=20).verdict == STRONG_LOCAL_MIN:
            return K, x
    raise RuntimeError("no certified instance found")


def rank_one_max_instance(rng, shape=(3, 3), dim=2, field="complex"):
    """``x = u v^*`` and a random subspace containing it; ``x`` is always
    critical for the 2-norm and a strong local maximum when
    ``||y^* u||^2 + ||y v||^2 < 1`` on ``x^perp``."""
    m, n = shape
    u = normalize(random_matrix(rng, (m, 1), field))
    v = normalize(random_matrix(rng, (n, 1), field))
    x = u @ np.conj(v).T
    K = orthonormalize([x] + [random_matrix(rng, shape, field) for _ in range(dim - 1)], field)
    return K, K.project(x)


def certified_two_norm_max(rng, max_tries=100, **kwargs):
    for _ in range(max_tries):
        K, x = rank_one_max_instance(rng, **kwargs)
        if two_norm_local_max_certificate(K, x, samples=20).verdict == STRONG_LOCAL_MAX:
            return K, x
    raise RuntimeError("no certified instance found")


def optimizer_critical_point(rng, fspec=VON_NEUMANN, shape=(2, 3), dim=2, field="complex",
                             sense="minimize", restarts=2, seed=None):
    """Random subspace and a converged optimizer point of ``fspec`` in it."""
    K = orthonormalize([random_matrix(rng, shape, field) for _ in range(dim)], field)
    seed = int(rng.integers(2 ** 31)) if seed is None else seed
    res = optimize_entropy(K, OptimizerConfig(restarts=restarts, seed=seed, f=fspec, sense=sense))
    return K, res.best_point, res


def is_critical(K, x, fspec=VON_NEUMANN, crittol=None):
    return criticality_check(K, x, fspec, crittol).verdict == "Critical"
