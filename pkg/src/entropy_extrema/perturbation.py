"""Second-order perturbation of entropy and eigenvalues.

For full-rank ``xx^*``, unit ``x`` and tangent ``y``::

    S(A(eps) / Tr A(eps)) = S(A1(eps)) + eps^2 Tr[(xx^* - yy^*) ln xx^*] + O(eps^3)

with ``A(eps) = (x + eps y)(x + eps y)^*`` and ``A1(eps) = xx^* + eps(xy^* + yx^*)``.
The ``eps^2`` coefficient equals ``S(yy^*) - S(xx^*) + D(yy^* || xx^*)``.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .entropy import check_unit, density_entropy, hs_inner, relative_entropy
from .exceptions import DegenerateSpectrum, NotFullRank, NotOrthogonal, NotPSD
from .config import get_tolerances
from .spectral import check_hermitian, dag, hermitian_eigen, log_on_support

DEFAULT_SCHEDULE = (1e-2, 5e-3, 2.5e-3)
GAP_TOL = 1e-6


def _require_full_rank(x):
    A = x @ dag(x)
    w = hermitian_eigen(A).eigenvalues
    if w[-1] <= get_tolerances().ranktol:
        raise NotFullRank(f"xx^* has smallest eigenvalue {w[-1]:.3e}")
    return A


def affine_expansion_check(x, y, eps):
    """``|S(A(eps)/Tr A(eps)) - S(A1(eps)) - eps^2 Tr[(xx^*-yy^*) ln xx^*]|``.

    Expected to scale like ``eps^3``. Raises :class:`NotPSD` when ``eps`` is
    large enough that the affine part ``A1(eps)`` has a negative eigenvalue.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    check_unit(y, "y")
    if abs(np.real(hs_inner(x, y))) > 1e-9:
        raise NotOrthogonal("direction must satisfy Tr[xy^* + yx^*] = 0")
    A = _require_full_rank(x)
    z = x + eps * y
    Ae = z @ dag(z)
    A1 = A + eps * (x @ dag(y) + y @ dag(x))
    lo = hermitian_eigen(A1).eigenvalues[-1]
    if lo < -get_tolerances().spectol:
        raise NotPSD(f"A1(eps) has eigenvalue {lo:.3e}; eps is too large for this x")
    corr = np.trace((A - y @ dag(y)) @ log_on_support(A)).real
    lhs = density_entropy(Ae / np.trace(Ae).real)
    return float(abs(lhs - density_entropy(A1) - eps ** 2 * corr))


def necessary_condition(x, y):
    """``Tr[(xx^* - yy^*) ln xx^*]`` and its deviation from
    ``S(yy^*) - S(xx^*) + D(yy^* || xx^*)``.

    At a strong local minimum with full-rank ``xx^*`` the value must be
    positive for every unit ``y`` in ``x^perp``.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    check_unit(y, "y")
    A = _require_full_rank(x)
    C = y @ dag(y)
    value = float(np.trace((A - C) @ log_on_support(A)).real)
    rhs = density_entropy(C) - density_entropy(A) + relative_entropy(C, A)
    return {"value": value, "identity_residual": float(abs(value - rhs))}


@dataclass
class PerturbationReport:
    schedule: List[float]
    residuals: List[float]
    ratios: List[float]
    f_diag: List[float]
    skipped: bool = False
    reason: str = ""

    @property
    def exact(self):
        """All residuals at roundoff level (the expansion is exact)."""
        return not self.skipped and max(self.residuals) <= 1e-12

    @property
    def cubic(self):
        """Halving ratios consistent with ``eps^3`` (within ``[6, 10]``)."""
        return not self.skipped and all(6 <= r <= 10 for r in self.ratios)

    def to_dict(self):
        return {"schedule": self.schedule, "residuals": self.residuals,
                "ratios": self.ratios, "f_diag": self.f_diag,
                "skipped": self.skipped, "reason": self.reason,
                "exact": self.exact, "cubic": self.cubic}


def eigenvalue_perturbation_check(A, B, C, schedule=DEFAULT_SCHEDULE, raise_on_degenerate=False):
    """Compare ``lambda_i(A + eps B + eps^2 C) - mu_i(A + eps B)`` with
    ``eps^2 f_ii`` where ``f_ii`` are the diagonal entries of ``C`` in the
    eigenbasis of ``A``.

    Degenerate spectra (gap below ``1e-6``) are reported as skipped, or
    raise :class:`DegenerateSpectrum` when ``raise_on_degenerate`` is set.
    """
    A, B, C = (check_hermitian(np.asarray(m)) for m in (A, B, C))
    w, v = hermitian_eigen(A)
    schedule = [float(e) for e in schedule]
    gap = float(np.min(-np.diff(w))) if w.size > 1 else np.inf
    if gap < GAP_TOL:
        msg = f"eigenvalue gap {gap:.3e} below {GAP_TOL:g}"
        if raise_on_degenerate:
            raise DegenerateSpectrum(msg)
        return PerturbationReport(schedule, [], [], [], True, msg)
    f = np.real(np.diag(dag(v) @ C @ v))
    residuals = []
    for eps in schedule:
        lam = hermitian_eigen(A + eps * B + eps ** 2 * C).eigenvalues
        mu = hermitian_eigen(A + eps * B).eigenvalues
        residuals.append(float(np.max(np.abs(lam - mu - eps ** 2 * f))))
    ratios = [r0 / r1 if r1 > 0 else np.inf for r0, r1 in zip(residuals, residuals[1:])]
    return PerturbationReport(schedule, residuals, [float(r) for r in ratios], f.tolist())
