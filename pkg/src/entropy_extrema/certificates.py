"""Closed-form derivative certificates for critical points and strong local
extrema of entropy functions restricted to a matrix subspace.

Von Neumann entropy
    Under local commutativity (``xx^*`` commutes with ``xy^*``)::

        D_y^2 H(x) = 2 Tr[xx^* ln xx^*] - 2 Tr[yy^* ln xx^*]
                     - Tr[(xy^* + yx^*)^2 (xx^*)^{-1}]

    and, with the worst phase of ``y``, ``D_y^2 H(x) > 0`` iff
    ``a + b < c - d`` for the terms of :func:`vn_terms`.

2-norm
    ``D_y^2 H_2(x) = 4 (-a + Re Tr[(xy^*)^2] + c + d)``; the worst phase gives
    ``4 F(x, y)`` with ``F = -a + b + c + d`` from :func:`two_norm_terms`.

Inverses and logarithms are taken on the support of ``xx^*``. Directions
whose ``y22`` block is nonzero have an infinite second entropy derivative
and count as strictly positive.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np
from scipy.linalg import null_space

from .config import get_tolerances
from .entropy import (VON_NEUMANN, check_unit, first_directional_derivative,
                      hs_inner, normalize, pnorm)
from .exceptions import (InvariantViolation, NotCommuting, NotNormalized,
                         NotOrthogonal)
from .spectral import dag, inverse_on_support, log_on_support
from .subspaces import (_require_member, canonical_blocks, commutator_norm,
                        local_commutativity_check, orthogonal_complement_at,
                        random_tangent, second_derivative_finite,
                        tangent_directions)

CRITICAL = "Critical"
STRONG_LOCAL_MIN = "StrongLocalMin"
STRONG_LOCAL_MAX = "StrongLocalMax"
VIOLATED = "Violated"
INAPPLICABLE = "Inapplicable"

ORTHO_TOL = 1e-9
TERM_TOL = 1e-8
DEFAULT_SAMPLES = 100
NEAR_ZERO_MARGIN = 1e-6  # margins this small are flagged in the notes


@dataclass
class CertificateReport:
    verdict: str
    directions: List[dict] = field(default_factory=list)
    notes: str = ""
    form_margin: float = None  # exact worst margin over all tangent directions

    @property
    def witnesses(self):
        return [d for d in self.directions if d.get("witness")]

    def to_dict(self):
        return {"verdict": self.verdict, "directions": self.directions,
                "notes": self.notes, "form_margin": self.form_margin}


class VnTerms(NamedTuple):
    a: float
    b: float
    c: float
    d: float

    @property
    def margin(self):
        """``(c - d) - (a + b)``; positive iff the second derivative is."""
        return (self.c - self.d) - (self.a + self.b)


class TwoNormTerms(NamedTuple):
    a: float
    b: float
    c: float
    d: float

    @property
    def F(self):
        return -self.a + self.b + self.c + self.d


def _check_direction(x, y, orthogonal=True):
    check_unit(y, "y")
    if orthogonal and abs(hs_inner(x, y)) > ORTHO_TOL:
        raise NotOrthogonal("direction must satisfy Tr[x y^*] = 0")


def _check_tangent(x, y):
    check_unit(y, "y")
    if abs(np.real(hs_inner(x, y))) > ORTHO_TOL:
        raise NotOrthogonal("direction must satisfy Tr[xy^* + yx^*] = 0")


# -- first derivative --------------------------------------------------------

def criticality_check(K, x, fspec=VON_NEUMANN, crittol=None):
    """``x`` is critical iff ``|D_y f(x)| <= crittol`` along every real tangent
    direction (``y`` and ``i y`` for a complex field)."""
    x = np.asarray(x)
    _require_member(K, x)
    check_unit(x)
    crittol = get_tolerances().crittol if crittol is None else crittol
    rows = []
    for i, y in enumerate(tangent_directions(K, x)):
        dy = first_directional_derivative(fspec, x, y)
        rows.append({"index": i, "derivative": dy, "margin": crittol - abs(dy),
                     "witness": abs(dy) > crittol})
    bad = [r for r in rows if r["witness"]]
    verdict = VIOLATED if bad else CRITICAL
    worst = max((abs(r["derivative"]) for r in rows), default=0.0)
    notes = f"{fspec.label}: max |D_y f| = {worst:.3e} over {len(rows)} directions (crittol {crittol:g})"
    return CertificateReport(verdict, rows, notes)


# -- von Neumann second derivative -------------------------------------------

def vn_terms(x, y, orthogonal=True, check=True):
    """The quadruple ``(a, b, c, d)``::

        a = |Tr[(xx^*)^{-1} (xy^*)^2]|     b = Tr[(xx^*)^{-1} xy^* yx^*]
        c = Tr[xx^* ln xx^*]               d = Tr[yy^* ln xx^*]

    Parameters
    ----------
    x, y : ndarray
        Unit-norm point and direction.
    orthogonal : bool
        Require ``Tr[x y^*] = 0``; pass ``False`` for identities such as
        ``y = x``.
    check : bool
        Enforce ``0 <= b <= 1`` and ``c <= 0`` (always true), and
        ``a <= b`` when ``xx^*`` and ``xy^*`` commute, to ``1e-8``.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    _check_direction(x, y, orthogonal)
    A = x @ dag(x)
    Ainv = inverse_on_support(A)
    L = log_on_support(A)
    M = x @ dag(y)
    a = abs(np.trace(Ainv @ M @ M))
    b = np.trace(Ainv @ M @ dag(M)).real
    c = np.trace(A @ L).real
    d = np.trace(y @ dag(y) @ L).real
    terms = VnTerms(float(a), float(b), float(c), float(d))
    if check:
        if not (-TERM_TOL <= b <= 1 + TERM_TOL):
            raise InvariantViolation(f"b = {b} outside [0, 1]")
        if c > TERM_TOL:
            raise InvariantViolation(f"c = {c} is positive")
        if a > b + TERM_TOL and commutator_norm(x, y) <= get_tolerances().comtol:
            raise InvariantViolation(f"a = {a} exceeds b = {b}")
    return terms


def vn_second_derivative_commuting(x, y):
    """Closed-form ``D_y^2 H(x)`` for commuting ``xx^*`` and ``xy^*``.

    Returns ``inf`` when the ``y22`` block of ``y`` is nonzero (the true
    second derivative is infinite there and the formula does not apply).

    Raises
    ------
    NotCommuting
        If ``|| [xx^*, xy^*] ||_max > comtol``.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    _check_tangent(x, y)
    if commutator_norm(x, y) > get_tolerances().comtol:
        raise NotCommuting("xx^* and xy^* do not commute")
    if not second_derivative_finite(x, y):
        return math.inf
    return _vn_form(x, y)


def worst_phase(x, y):
    """``e^{i theta} y`` with ``Tr[(xx^*)^{-1} (xy^*)^2]`` real and nonnegative,
    which minimizes the second derivative over the phases of ``y``."""
    x = np.asarray(x)
    y = np.asarray(y)
    A = x @ dag(x)
    M = x @ dag(y)
    t = np.trace(inverse_on_support(A) @ M @ M)
    if abs(t) == 0:
        return y
    return np.exp(1j * np.angle(t) / 2) * y


def _vn_form(x, y):
    # closed-form second derivative, also used as a quadratic form in y (no checks)
    A = x @ dag(x)
    L = log_on_support(A)
    B = x @ dag(y) + y @ dag(x)
    val = (2 * np.trace(A @ L) * np.vdot(y, y) - 2 * np.trace(y @ dag(y) @ L)
           - np.trace(B @ B @ inverse_on_support(A)))
    return float(val.real)


def _real_form_matrix(q, basis):
    """Symmetric matrix of the real quadratic form ``q`` on ``span_R(basis)``."""
    n = len(basis)
    Q = np.empty((n, n))
    for i in range(n):
        Q[i, i] = q(basis[i])
        for j in range(i):
            Q[i, j] = Q[j, i] = (q(basis[i] + basis[j]) - q(basis[i] - basis[j])) / 4
    return Q


def finite_tangent_basis(K, x):
    """Real orthonormal basis of the tangent directions whose ``y22`` block
    vanishes, i.e. where the entropy has a finite second derivative."""
    tangent = tangent_directions(K, x)
    if not tangent:
        return []
    probe = canonical_blocks(x, tangent[0])
    if probe.y22.size == 0:
        return tangent
    cols = []
    for t in tangent:
        y22 = canonical_blocks(x, t).y22.ravel()
        cols.append(np.concatenate([y22.real, y22.imag]))
    ns = null_space(np.array(cols).T, rcond=1e-10)
    return [np.tensordot(c, np.array(tangent), axes=1) for c in ns.T]


def _evaluate_vn(x, y, index, kind, certmargin):
    if not second_derivative_finite(x, y):
        return {"index": index, "kind": kind, "infinite": True,
                "a": None, "b": None, "c": None, "d": None,
                "margin": None, "witness": False}
    t = vn_terms(x, y, check=False)
    return {"index": index, "kind": kind, "infinite": False, **t._asdict(),
            "margin": t.margin, "witness": t.margin <= certmargin}


def vn_local_min_certificate(K, x, samples=DEFAULT_SAMPLES, seed=0, extra_directions=()):
    """Certify ``x`` as a strong local minimum of von Neumann entropy on the
    unit sphere of ``K``.

    The certificate is :data:`INAPPLICABLE` unless local commutativity holds.
    Otherwise ``x`` must be critical and have margin ``(c-d)-(a+b) >
    certmargin`` along every basis direction of ``x^perp``, along
    ``samples`` random unit directions, along any ``extra_directions``, and
    for the exact minimum of the second-derivative form over the directions
    with finite second derivative.
    """
    x = np.asarray(x)
    _require_member(K, x)
    check_unit(x)
    tol = get_tolerances()
    comm = local_commutativity_check(K, x)
    if not comm.holds:
        names = ", ".join(f"#{w.index} ({w.commutator:.2e})" for w in comm.witnesses)
        return CertificateReport(INAPPLICABLE, [], f"local commutativity fails along {names}")

    crit = criticality_check(K, x, VON_NEUMANN)
    rows = [_evaluate_vn(x, y, i, "basis", tol.certmargin)
            for i, y in enumerate(orthogonal_complement_at(K, x))]
    rng = np.random.default_rng(seed)
    for i in range(samples if K.dim > 1 else 0):
        rows.append(_evaluate_vn(x, random_tangent(K, x, rng), i, "sampled", tol.certmargin))
    for i, y in enumerate(extra_directions):
        y = normalize(np.asarray(y))
        _require_member(K, y)
        rows.append(_evaluate_vn(x, y, i, "structured", tol.certmargin))

    # exact worst margin: D^2/2 is a real quadratic form on finite directions
    finite = finite_tangent_basis(K, x)
    form_margin = None
    if finite:
        Q = _real_form_matrix(lambda y: _vn_form(x, y) / 2, finite)
        w, v = np.linalg.eigh(Q)
        form_margin = float(w[0])
        if form_margin <= tol.certmargin:
            y = normalize(np.tensordot(v[:, 0], np.array(finite), axes=1))
            rows.append({**_evaluate_vn(x, y, 0, "form-minimizer", tol.certmargin),
                         "margin": form_margin, "witness": True})

    notes = [crit.notes]
    if crit.verdict != CRITICAL:
        rows.extend(r | {"kind": "gradient"} for r in crit.witnesses)
        notes.append("not a critical point")
    n_inf = sum(r["infinite"] for r in rows if "infinite" in r)
    notes.append(f"{n_inf} directions with infinite second derivative")
    _margin_notes(rows, form_margin, notes)
    ok = not any(r["witness"] for r in rows)
    return CertificateReport(STRONG_LOCAL_MIN if ok else VIOLATED, rows, "; ".join(notes),
                             form_margin)


def _margin_notes(rows, form_margin, notes):
    margins = [r["margin"] for r in rows if r.get("margin") is not None and r.get("kind") != "gradient"]
    if form_margin is not None:
        margins.append(form_margin)
        notes.append(f"exact worst margin {form_margin:.6e}")
    if margins and abs(min(margins)) < NEAR_ZERO_MARGIN:
        notes.append(f"near-zero margin {min(margins):.3e}: verdict is tolerance-sensitive")


# -- 2-norm ------------------------------------------------------------------

def two_norm_terms(x, y, check=True):
    """``a = Tr[(xx^*)^2]``, ``b = |Tr[(xy^*)^2]|``, ``c = Tr[xx^* yy^*]``,
    ``d = Tr[x^*x y^*y]``."""
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    check_unit(y, "y")
    A = x @ dag(x)
    M = x @ dag(y)
    a = np.trace(A @ A).real
    b = abs(np.trace(M @ M))
    c = np.trace(A @ y @ dag(y)).real
    d = np.trace(dag(x) @ x @ dag(y) @ y).real
    terms = TwoNormTerms(float(a), float(b), float(c), float(d))
    if check:
        if not (-TERM_TOL <= a <= 1 + TERM_TOL):
            raise InvariantViolation(f"a = {a} outside [0, 1]")
        if b > min(c, d) + TERM_TOL:
            raise InvariantViolation(f"b = {b} exceeds min(c, d) = {min(c, d)}")
    return terms


def two_norm_F(x, y):
    return two_norm_terms(x, y).F


def two_norm_second_derivative(x, y):
    """``D_y^2 H_2(x)`` along a unit tangent ``y`` (no phase maximization)."""
    x = np.asarray(x)
    y = np.asarray(y)
    check_unit(x)
    _check_tangent(x, y)
    return _two_norm_form(x, y)


def _two_norm_form(x, y):
    A = x @ dag(x)
    M = x @ dag(y)
    B = M + dag(M)
    val = (2 * np.trace(B @ B) + 4 * np.trace(A @ y @ dag(y))
           - 4 * np.trace(A @ A) * np.vdot(y, y))
    return float(val.real)


def _evaluate_two_norm(x, y, index, kind, certmargin):
    t = two_norm_terms(x, y, check=False)
    cross = complex(np.trace(x @ dag(x) @ x @ dag(y)))
    return {"index": index, "kind": kind, **t._asdict(), "F": t.F,
            "margin": -t.F, "critical_residual": abs(cross),
            "witness": t.F >= -certmargin}


def two_norm_local_max_certificate(K, x, samples=DEFAULT_SAMPLES, seed=0, extra_directions=()):
    """Certify ``x`` as a strong local maximum of ``Tr[(xx^*)^2]`` on the unit
    sphere of ``K``: ``Tr[xx^* xy^*] = 0`` and ``F(x, y) < -certmargin`` for
    every unit ``y`` in ``x^perp`` (basis, samples, extras and the exact
    maximum of the second-derivative form)."""
    x = np.asarray(x)
    _require_member(K, x)
    check_unit(x)
    tol = get_tolerances()
    crit = criticality_check(K, x, pnorm(2))
    rows = [_evaluate_two_norm(x, y, i, "basis", tol.certmargin)
            for i, y in enumerate(orthogonal_complement_at(K, x))]
    rng = np.random.default_rng(seed)
    for i in range(samples if K.dim > 1 else 0):
        rows.append(_evaluate_two_norm(x, random_tangent(K, x, rng), i, "sampled", tol.certmargin))
    for i, y in enumerate(extra_directions):
        y = normalize(np.asarray(y))
        _require_member(K, y)
        rows.append(_evaluate_two_norm(x, y, i, "structured", tol.certmargin))

    tangent = tangent_directions(K, x)
    form_margin = None
    if tangent:
        Q = _real_form_matrix(lambda y: -_two_norm_form(x, y) / 4, tangent)
        w, v = np.linalg.eigh(Q)
        form_margin = float(w[0])
        if form_margin <= tol.certmargin:
            y = normalize(np.tensordot(v[:, 0], np.array(tangent), axes=1))
            rows.append({**_evaluate_two_norm(x, y, 0, "form-maximizer", tol.certmargin),
                         "margin": form_margin, "witness": True})

    notes = [crit.notes]
    if crit.verdict != CRITICAL:
        rows.extend(r | {"kind": "gradient"} for r in crit.witnesses)
        notes.append("Tr[xx^* xy^*] does not vanish")
    _margin_notes(rows, form_margin, notes)
    ok = not any(r["witness"] for r in rows)
    return CertificateReport(STRONG_LOCAL_MAX if ok else VIOLATED, rows, "; ".join(notes),
                             form_margin)


# -- structured directions for tensor points -----------------------------------

def tensor_case_directions(K1, x1, K2, x2, rng=None, n_random=4):
    """Labelled unit directions in ``(x1 (x) x2)^perp`` following the case
    split used for tensor points: ``x1 (x) y2``, ``y1 (x) x2``, ``y1 (x) y2``,
    random ``alpha x1(x)y2 + beta y1(x)x2 + gamma y'`` combinations, and the
    split ``y = alpha u + beta v`` of ``y in x1^perp (x) x2^perp`` by the
    projection ``P = x^*(xx^*)^{-1}x`` onto the row space of ``x``.

    The ``u``/``v`` parts need not lie in ``K1 (x) K2``; they are labelled
    ``"u"`` and ``"v"``.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    p1 = orthogonal_complement_at(K1, x1)
    p2 = orthogonal_complement_at(K2, x2)
    out = [("x1*y2", np.kron(x1, y2)) for y2 in p2]
    out += [("y1*x2", np.kron(y1, x2)) for y1 in p1]
    out += [("y1*y2", np.kron(y1, y2)) for y1 in p1 for y2 in p2]
    if not (p1 and p2):
        return out
    x = np.kron(x1, x2)
    P = dag(x) @ inverse_on_support(x @ dag(x)) @ x
    cplx = K1.field == "complex"

    def rand_comb(vecs):
        c = rng.standard_normal(len(vecs))
        if cplx:
            c = c + 1j * rng.standard_normal(len(vecs))
        return np.tensordot(c, np.array(vecs), axes=1)

    pp = [np.kron(y1, y2) for y1 in p1 for y2 in p2]
    for _ in range(n_random):
        yprime = normalize(rand_comb(pp))
        u, v = yprime @ P, yprime @ (np.eye(P.shape[0]) - P)
        for label, part in (("u", u), ("v", v)):
            if np.linalg.norm(part) > 1e-9:
                out.append((label, normalize(part)))
        alpha, beta, gamma = rng.standard_normal(3)
        y = (alpha * normalize(rand_comb([np.kron(x1, y2) for y2 in p2]))
             + beta * normalize(rand_comb([np.kron(y1, x2) for y1 in p1]))
             + gamma * yprime)
        out.append(("alpha-beta-gamma", normalize(y)))
    return out
