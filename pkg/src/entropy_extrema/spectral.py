"""Dense spectral primitives.

Matrices are plain numpy arrays. A real-dtype array is a matrix over the
real field; a complex-dtype array is over the complex field. Every
spectral formula downstream is built on :func:`hermitian_eigen` and
:func:`svd`, and matrix functions of positive semidefinite matrices are
applied on the support only (zero on the kernel).
"""

from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .exceptions import NonFinite, NotHermitian, NotPSD


class HermitianSpectrum(NamedTuple):
    eigenvalues: np.ndarray   # non-increasing
    eigenvectors: np.ndarray  # columns, unitary


class SvdFactors(NamedTuple):
    left: np.ndarray       # m x m unitary
    singulars: np.ndarray  # non-increasing, length min(m, n)
    right: np.ndarray      # n x n unitary, x = left @ diag @ right^*
    rank: int


def dag(a):
    return np.conj(a).T


def field_of(a):
    return "complex" if np.iscomplexobj(a) else "real"


def _check_finite(a):
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    return a


def check_hermitian(a, tol=None):
    a = _check_finite(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    tol = get_tolerances().spectol if tol is None else tol
    if a.size and np.max(np.abs(a - dag(a))) > tol:
        raise NotHermitian("matrix is not Hermitian within spectol")
    return a


def hermitian_eigen(a):
    """Eigendecomposition of a Hermitian matrix, eigenvalues non-increasing.

    Parameters
    ----------
    a : (m, m) array_like
        Hermitian within ``spectol`` (max-entry norm of ``a - a^*``).

    Returns
    -------
    HermitianSpectrum
    """
    a = check_hermitian(a)
    # symmetrize the residual so eigh sees an exactly Hermitian input
    w, v = np.linalg.eigh((a + dag(a)) / 2)
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def svd(x):
    """Full SVD with rank counted against ``ranktol``."""
    x = _check_finite(x)
    u, s, vh = np.linalg.svd(x, full_matrices=True)
    rank = int(np.sum(s > get_tolerances().ranktol))
    return SvdFactors(u, s, dag(vh), rank)


def _psd_spectrum(a):
    tol = get_tolerances()
    w, v = hermitian_eigen(a)
    if w.size and w[-1] < -tol.spectol:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e} is below -spectol")
    w = np.where(w < 0, 0.0, w)
    return w, v


def psd_function(a, g):
    """Apply ``g`` to the positive eigenvalues of ``a``; zero on the kernel.

    Eigenvalues at or below ``ranktol`` count as kernel.
    """
    w, v = _psd_spectrum(a)
    support = w > get_tolerances().ranktol
    gw = np.zeros_like(w)
    gw[support] = g(w[support])
    return (v * gw) @ dag(v)


def log_on_support(a):
    return psd_function(a, np.log)


def inverse_on_support(a):
    return psd_function(a, np.reciprocal)


def support_projector(a):
    return psd_function(a, np.ones_like)


def psd_eigenvalues(a):
    """Eigenvalues of a PSD matrix, non-increasing, negatives clamped to 0."""
    return _psd_spectrum(a)[0]


def tensor(x1, x2):
    """Kronecker product ``x1 (x) x2``."""
    return np.kron(_check_finite(x1), _check_finite(x2))


# -- JSON exchange format ---------------------------------------------------

def matrix_to_dict(a):
    a = np.atleast_2d(np.asarray(a))
    m, n = a.shape
    out = {"rows": m, "cols": n, "field": field_of(a),
           "re": np.real(a).ravel().tolist()}
    if np.iscomplexobj(a):
        out["im"] = np.imag(a).ravel().tolist()
    return out


def matrix_from_dict(d):
    try:
        m, n, field = int(d["rows"]), int(d["cols"]), d["field"]
        re = np.asarray(d["re"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from None
    if m < 1 or n < 1 or re.size != m * n:
        raise ValueError("matrix entry count does not match rows x cols")
    if field == "real":
        if "im" in d and np.any(np.asarray(d["im"], dtype=float) != 0):
            raise ValueError("real matrix carries nonzero imaginary parts")
        return _check_finite(re.reshape(m, n))
    if field != "complex":
        raise ValueError(f"unknown field {field!r}")
    im = np.asarray(d.get("im", np.zeros(m * n)), dtype=float)
    if im.size != m * n:
        raise ValueError("imaginary part has the wrong length")
    return _check_finite((re + 1j * im).reshape(m, n))
