"""Entropy functionals of a matrix point and their directional derivatives.

A *matrix point* is an ``m x n`` array ``x``; the functionals only depend on
the spectrum of ``x x^*`` normalized to unit trace, so they are invariant
under scaling and under ``x -> U x V`` for unitary ``U, V``. Entropies are in
nats.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .exceptions import BadExponent, NonFinite, NotNormalized, NotPSD, ZeroMatrix
from .spectral import dag, hermitian_eigen, log_on_support, psd_eigenvalues


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr[a b^*]``."""
    return np.vdot(b, a)


def hs_normsq(a):
    return float(np.vdot(a, a).real)


def normalize(x):
    nrm = np.sqrt(hs_normsq(x))
    if nrm == 0:
        raise ZeroMatrix("cannot normalize the zero matrix")
    return x / nrm


def check_unit(x, what="x"):
    if abs(hs_normsq(x) - 1.0) > get_tolerances().normtol:
        raise NotNormalized(f"{what} must satisfy Tr[{what}{what}*] = 1")


def _shannon(mu):
    mu = mu[mu > 0]
    return float(-np.sum(mu * np.log(mu)))


def normalized_spectrum(x):
    """Nonzero-padded eigenvalues of ``x x^* / Tr[x x^*]``, non-increasing.

    Computed as squared singular values of ``x``: small eigenvalues keep
    full relative accuracy, which the second-order finite differences need.
    """
    x = np.asarray(x)
    if not np.all(np.isfinite(x)):
        raise NonFinite("matrix has non-finite entries")
    s = np.linalg.svd(x, compute_uv=False)
    nsq = float(np.sum(s ** 2))
    if nsq == 0:
        raise ZeroMatrix("entropy of the zero matrix is undefined")
    mu = np.zeros(x.shape[0])
    mu[: s.size] = s ** 2 / nsq
    return mu


def vn_entropy(x):
    """Von Neumann entropy of ``x x^*`` after normalization to unit trace.

    Uses ``0 ln 0 = 0``; the result lies in ``[0, ln m]``.
    """
    return _shannon(normalized_spectrum(x))


def pnorm_entropy(x, p):
    """``sum_i mu_i^p`` over the normalized eigenvalues of ``x x^*``."""
    if not p > 1:
        raise BadExponent(f"p must exceed 1, got {p}")
    return float(np.sum(normalized_spectrum(x) ** p))


def density_entropy(rho):
    """``-Tr[rho ln rho]`` of a PSD matrix (no normalization)."""
    return _shannon(psd_eigenvalues(rho))


def relative_entropy(rho, sigma):
    """Quantum relative entropy ``Tr[rho (ln rho - ln sigma)]``.

    Returns ``inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``.
    """
    tol = get_tolerances()
    for name, m in (("rho", rho), ("sigma", sigma)):
        if abs(np.trace(m).real - 1.0) > tol.normtol * 1e3:
            raise NotNormalized(f"{name} must have unit trace")
    w_r, v_r = hermitian_eigen(rho)
    w_s, v_s = hermitian_eigen(sigma)
    if w_r[-1] < -tol.spectol or w_s[-1] < -tol.spectol:
        raise NotPSD("relative entropy needs PSD arguments")
    kernel = v_s[:, w_s <= tol.ranktol]
    if kernel.size:
        leak = np.real(np.trace(dag(kernel) @ rho @ kernel))
        if leak > tol.ranktol:
            return float("inf")
    return float(np.real(np.trace(rho @ (log_on_support(rho) - log_on_support(sigma)))))


@dataclass(frozen=True)
class SpectralFunction:
    """Scalar function ``F`` applied to the eigenvalues of ``x x^*``.

    ``kind`` is ``"vn"`` (``F(t) = -t ln t``) or ``"pnorm"`` (``F(t) = t^p``).
    """

    kind: str
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in ("vn", "pnorm"):
            raise ValueError(f"unknown spectral function {self.kind!r}")
        if self.kind == "pnorm" and not self.p > 1:
            raise BadExponent(f"p must exceed 1, got {self.p}")

    @classmethod
    def parse(cls, text):
        """``"vn"``, ``"p2"``, ``"p3"`` or ``"p:REAL"``."""
        if text == "vn":
            return VON_NEUMANN
        if text.startswith("p:"):
            return cls("pnorm", float(text[2:]))
        if text.startswith("p") and text[1:].replace(".", "", 1).isdigit():
            return cls("pnorm", float(text[1:]))
        raise ValueError(f"cannot parse spectral function {text!r}")

    @property
    def label(self):
        return "vn" if self.kind == "vn" else f"p:{self.p:g}"

    def F(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "vn":
            pos = t > 0
            out = np.zeros_like(t)
            out[pos] = -t[pos] * np.log(t[pos])
            return out
        return t ** self.p

    def Fprime(self, t):
        """Derivative of ``F``; for von Neumann only defined for ``t > 0``."""
        t = np.asarray(t, dtype=float)
        if self.kind == "vn":
            return -(1.0 + np.log(t))
        return self.p * t ** (self.p - 1)

    def value(self, x):
        """The normalized functional at ``x``."""
        if self.kind == "vn":
            return vn_entropy(x)
        return pnorm_entropy(x, self.p)


VON_NEUMANN = SpectralFunction("vn")


def pnorm(p):
    return SpectralFunction("pnorm", p)


def derivative_kernel(fspec, x):
    """``F'(x x^*) x``; the Euclidean gradient of ``Tr F(xx^*)`` is twice this.

    For von Neumann entropy, eigenvalues at or below ``ranktol`` contribute
    nothing; those eigenvectors are orthogonal to the columns of ``x`` up to
    ``sqrt(ranktol)``.
    """
    x = np.asarray(x)
    if hs_normsq(x) == 0:
        raise ZeroMatrix("derivative at the zero matrix is undefined")
    w, v = hermitian_eigen(x @ dag(x))
    w = np.clip(w, 0.0, None)
    fp = np.zeros_like(w)
    if fspec.kind == "vn":
        support = w > get_tolerances().ranktol
        fp[support] = fspec.Fprime(w[support])
    else:
        fp = fspec.Fprime(w)
    return (v * fp) @ (dag(v) @ x)


def first_directional_derivative(fspec, x, y):
    """``D_y f(x) = Tr[F'(xx^*)(xy^* + yx^*)]`` for ``f(x) = Tr F(xx^*)``.

    For unit ``x`` and tangent ``y`` (``Re Tr[xy^*] = 0``) this equals the
    derivative of the normalized functional along ``x + eps y``.
    """
    return float(2.0 * np.real(hs_inner(derivative_kernel(fspec, x), y)))


# -- finite-difference oracle ----------------------------------------------

DEFAULT_STEPS = (1e-3, 5e-4, 2.5e-4)


class FiniteDifference(NamedTuple):
    value: float
    error: float
    diverging: bool
    raw: tuple  # per-step central differences


def sphere_path(f, x, y):
    """``eps -> f((x + eps y) / ||x + eps y||)``."""
    def g(eps):
        return f(normalize(x + eps * y))
    return g


def _richardson(d):
    """Repeated Richardson extrapolation for an even-power error series and
    step ratio 2. Returns (estimate, error estimate)."""
    table = [list(d)]
    k = 1
    while len(table[-1]) > 1:
        prev = table[-1]
        fac = 4.0 ** k
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
        k += 1
    best = table[-1][0]
    err = abs(best - table[-2][-1])
    return best, err


def _log_slope(steps, d):
    """Coefficient of ``ln h`` in the exact fit
    ``d(h) = alpha + beta ln h + gamma h^2 + delta h^2 ln h`` through four
    points, plus its gain (sum of absolute weights) for noise propagation.

    The ``h^2 ln h`` column absorbs the O(eps^4) kernel eigenvalues that
    appear when ``y22 = 0`` but ``y12, y21 != 0``.
    """
    h = np.asarray(steps, dtype=float)
    design = np.column_stack([np.ones(4), np.log(h), h ** 2, h ** 2 * np.log(h)])
    weights = np.linalg.inv(design)[1]
    return float(weights @ np.asarray(d, dtype=float)), float(np.sum(np.abs(weights)))


# smallest |d D2 / d ln eps| treated as divergence; an infinite second
# derivative with y22 singular values s_k produces a slope of -4 sum s_k^2
LOG_SLOPE_FLOOR = 1e-6


def finite_difference_derivative(f, x, y, order, steps=DEFAULT_STEPS):
    """Directional derivative of ``f`` along the unit-sphere path through
    ``x`` in direction ``y``, by Richardson-extrapolated central differences.

    Parameters
    ----------
    f : callable
        Scale-invariant functional of a matrix point (e.g. :func:`vn_entropy`).
    x, y : ndarray
        Unit-norm point and unit-norm direction.
    order : {1, 2}
    steps : sequence of float
        Step sizes, each half the previous one.

    Returns
    -------
    FiniteDifference
        For ``order == 2`` an infinite second derivative shows up as central
        differences growing like ``-ln eps``. The growth is detected by a
        log-term fit over ``steps`` plus one extra step of twice the largest;
        when detected, ``diverging`` is set, ``value`` is the finest raw
        difference and ``error`` is ``inf``.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x, "x")
    check_unit(y, "y")
    g = sphere_path(f, x, y)
    g0 = g(0.0)

    def central(h):
        gp, gm = g(h), g(-h)
        if order == 1:
            return (gp - gm) / (2 * h)
        return (gp + gm - 2 * g0) / h ** 2

    raw = [central(h) for h in steps]
    value, err = _richardson(raw)
    diverging = False
    if order == 2 and len(steps) == 3:
        beta, gain = _log_slope((2 * steps[0],) + tuple(steps), [central(2 * steps[0])] + raw)
        # roundoff of a second difference is a few ulp(|g|) / h^2
        noise = 4 * np.finfo(float).eps * max(1.0, abs(g0)) / steps[-1] ** 2 * gain
        diverging = abs(beta) > max(2 * noise, LOG_SLOPE_FLOOR)
        if diverging:
            value, err = raw[-1], float("inf")
    return FiniteDifference(float(value), float(err), bool(diverging), tuple(raw))
