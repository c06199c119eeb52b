"""Acceptance suite: the ten headline checks at their stated tolerances.

Each test records a PASS/FAIL line that is printed in the terminal summary
(see ``conftest.py``) in addition to the usual pytest outcome.
"""

import json
import math
import time

import numpy as np
import pytest

from entropy_extrema import (CRITICAL, STRONG_LOCAL_MAX, VON_NEUMANN, affine_expansion_check,
                             anticommuting_family, canonical_blocks, criticality_check,
                             finite_difference_derivative, necessary_condition, normalize,
                             orthogonal_subspace, pnorm, real_gap_demo, second_derivative_finite,
                             tensor_subspace, two_norm_local_max_certificate,
                             vn_entropy, vn_second_derivative_commuting, vn_terms)
from entropy_extrema.certificates import tensor_case_directions, worst_phase
from entropy_extrema.entropy import hs_inner
from entropy_extrema.instances import (certified_two_norm_max, commuting_pair,
                                       optimizer_critical_point, orthogonal_unit, random_matrix)
from entropy_extrema.spectral import dag

LN2 = math.log(2)
FUNCTIONS = (VON_NEUMANN, pnorm(2), pnorm(3))


def commuting_instances(seed=300, count=500):
    rng = np.random.default_rng(seed)
    out = [(np.eye(2) / np.sqrt(2), np.diag([1.0, -1.0]) / np.sqrt(2))]
    while len(out) < count:
        out.append(commuting_pair(rng, n=int(rng.integers(2, 6))))
    return out


def criterion1_report():
    return real_gap_demo(2, 2).to_dict()


def criterion6_report(seed=600, count=100):
    rng = np.random.default_rng(seed)
    report = {}
    for fspec in FUNCTIONS:
        pts = [optimizer_critical_point(rng, fspec)[:2] for _ in range(count)]
        perm = rng.permutation(count)
        rows = []
        for i, j in enumerate(perm):
            (K1, x1), (K2, x2) = pts[i], pts[j]
            rep = criticality_check(tensor_subspace(K1, K2), np.kron(x1, x2), fspec, crittol=1e-7)
            worst = max(abs(r["derivative"]) for r in rep.directions)
            rows.append({"pair": [i, int(j)], "verdict": rep.verdict, "max_abs_derivative": worst})
        report[fspec.label] = rows
    return report


def test_criterion_1_real_gap(acceptance):
    t0 = time.perf_counter()
    d = real_gap_demo(2, 2)
    elapsed = time.perf_counter() - t0
    ok = (abs(d.h1 - LN2) <= 1e-10 and abs(d.h2 - LN2) <= 1e-10
          and abs(d.upper_bound_h12 - LN2) <= 1e-10 and d.gap >= LN2 - 1e-9
          and d.optimizer_h12 <= LN2 + 1e-6 and elapsed < 5)
    acceptance(1, ok, f"gap={d.gap:.12f} optimizer_h12={d.optimizer_h12:.12f} time={elapsed:.2f}s")
    assert ok


def test_criterion_2_orthogonal_entropy(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(200)
    worst = 0.0
    for m in (2, 4, 8):
        K = orthogonal_subspace(anticommuting_family(m, m))
        for _ in range(100):
            worst = max(worst, abs(vn_entropy(K.random_unit(rng)) - math.log(m)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5
    acceptance(2, ok, f"max |H - ln m| = {worst:.2e} time={elapsed:.2f}s")
    assert ok


def test_criterion_3_closed_form_vs_oracle(acceptance):
    t0 = time.perf_counter()
    failures, hand = 0, None
    for k, (x, y) in enumerate(commuting_instances()):
        closed = vn_second_derivative_commuting(x, y)
        fd = finite_difference_derivative(vn_entropy, x, y, 2)
        if k == 0:
            hand = closed
        if fd.diverging or abs(closed - fd.value) > max(1e-5, 1e-3 * abs(closed)):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and abs(hand + 4) <= 1e-10 and elapsed < 30
    acceptance(3, ok, f"{failures}/500 mismatches, hand instance {hand:.12f} time={elapsed:.2f}s")
    assert ok


def test_criterion_4_sign_equivalence(acceptance):
    checked, mismatches = 0, 0
    for x, y in commuting_instances():
        y = worst_phase(x, y)
        margin = vn_terms(x, y).margin
        if abs(margin) <= 1e-6:
            continue
        checked += 1
        mismatches += np.sign(vn_second_derivative_commuting(x, y)) != np.sign(margin)
    ok = mismatches == 0 and checked > 0
    acceptance(4, ok, f"{mismatches} sign mismatches over {checked} instances with |margin| > 1e-6")
    assert ok


def test_criterion_5_term_bounds(acceptance):
    rng = np.random.default_rng(500)
    b_bad = c_bad = ab_bad = 0
    for k in range(1000):
        m, n = (int(v) for v in rng.integers(2, 5, 2))
        r = int(rng.integers(1, min(m, n) + 1))
        x = normalize(random_matrix(rng, (m, r)) @ random_matrix(rng, (r, n)))
        t = vn_terms(x, orthogonal_unit(rng, x), check=False)
        b_bad += not (-1e-8 <= t.b <= 1 + 1e-8)
        c_bad += t.c > 1e-10
        # a <= b is a consequence of local commutativity; checked on commuting pairs
        xc, yc = commuting_pair(rng)
        tc = vn_terms(xc, yc, check=False)
        ab_bad += tc.a > tc.b + 1e-8
    tensor_bad = 0
    for _ in range(200):
        x1, x2 = (normalize(random_matrix(rng, (2, 3))) for _ in range(2))
        y1, y2 = orthogonal_unit(rng, x1), orthogonal_unit(rng, x2)
        t1, t2 = vn_terms(x1, y1, check=False), vn_terms(x2, y2, check=False)
        t = vn_terms(np.kron(x1, x2), np.kron(y1, y2), check=False)
        err = max(abs(t.a - t1.a * t2.a), abs(t.b - t1.b * t2.b),
                  abs(t.c - t1.c - t2.c), abs(t.d - t1.d - t2.d))
        tensor_bad += err > 1e-9
    ok = b_bad == c_bad == ab_bad == tensor_bad == 0
    acceptance(5, ok, f"b out of range {b_bad}, c > 0 {c_bad}, a > b (commuting) {ab_bad}, "
                      f"tensor identity failures {tensor_bad}/200")
    assert ok


def test_criterion_6_critical_closure(acceptance):
    t0 = time.perf_counter()
    report = criterion6_report()
    elapsed = time.perf_counter() - t0
    fails = {k: sum(r["verdict"] != CRITICAL for r in v) for k, v in report.items()}
    worst = max(r["max_abs_derivative"] for v in report.values() for r in v)
    ok = sum(fails.values()) == 0 and elapsed < 60
    acceptance(6, ok, f"failures {fails}, worst |D| = {worst:.1e} time={elapsed:.2f}s")
    assert ok


def test_criterion_7_divergence_dichotomy(acceptance):
    rng = np.random.default_rng(700)
    checked = disagree = 0
    for k in range(200):
        m = int(rng.integers(2, 5))
        r = int(rng.integers(1, m))
        field = "complex" if k % 2 else "real"
        W = np.linalg.qr(random_matrix(rng, (m, m), field))[0]
        Z = np.linalg.qr(random_matrix(rng, (m, m), field))[0]
        xs = np.zeros((m, m), dtype=W.dtype)
        xs[:r, :r] = np.diag(rng.uniform(0.1, 1, r))
        ys = random_matrix(rng, (m, m), field)
        if k % 4 < 2:
            ys[r:, r:] = 0
        x = normalize(W @ xs @ dag(Z))
        y = W @ ys @ dag(Z)
        y = normalize(y - hs_inner(y, x) * x)
        y22 = np.max(np.abs(canonical_blocks(x, y).y22))
        if k % 4 >= 2 and y22 < 1e-3:
            continue
        if k % 4 < 2:
            assert y22 <= 1e-12
        checked += 1
        fd = finite_difference_derivative(vn_entropy, x, y, 2)
        disagree += second_derivative_finite(x, y) == fd.diverging
    ok = disagree == 0 and checked >= 190
    acceptance(7, ok, f"{disagree} disagreements over {checked} instances")
    assert ok


def test_criterion_8_affine_expansion(acceptance):
    rng = np.random.default_rng(800)
    bad_ratio = bad_identity = 0
    ratios = []
    for _ in range(100):
        x = normalize(random_matrix(rng, (3, 3)))
        y = orthogonal_unit(rng, x)
        ratio = affine_expansion_check(x, y, 1e-2) / affine_expansion_check(x, y, 5e-3)
        ratios.append(ratio)
        bad_ratio += not 6 <= ratio <= 10
        bad_identity += necessary_condition(x, y)["identity_residual"] > 1e-9
    ok = bad_ratio == bad_identity == 0
    acceptance(8, ok, f"{bad_ratio}/100 ratios outside [6, 10] (range {min(ratios):.3f} to "
                      f"{max(ratios):.3f}), identity failures {bad_identity}")
    assert ok


def test_criterion_9_two_norm_closure(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(900)
    certified = 0
    for k in range(100):
        K1, x1 = certified_two_norm_max(rng, shape=(3, 3), dim=2)
        K2, x2 = certified_two_norm_max(rng, shape=(3, 4), dim=2 + k % 2)
        K, x = tensor_subspace(K1, K2), np.kron(x1, x2)
        extra = [y for _, y in tensor_case_directions(K1, x1, K2, x2, rng=rng) if K.contains(y)]
        rep = two_norm_local_max_certificate(K, x, samples=50, seed=k, extra_directions=extra)
        certified += rep.verdict == STRONG_LOCAL_MAX
    elapsed = time.perf_counter() - t0
    ok = certified == 100
    acceptance(9, ok, f"{certified}/100 tensor points certified time={elapsed:.2f}s")
    assert ok


def test_criterion_10_determinism(acceptance):
    first = [json.dumps(criterion1_report(), sort_keys=True),
             json.dumps(criterion6_report(), sort_keys=True)]
    second = [json.dumps(criterion1_report(), sort_keys=True),
              json.dumps(criterion6_report(), sort_keys=True)]
    same = [a == b for a, b in zip(first, second)]
    ok = all(same)
    acceptance(10, ok, f"criterion 1 identical: {same[0]}, criterion 6 identical: {same[1]}")
    assert ok


@pytest.mark.parametrize("m", [2, 4, 8])
def test_orthogonal_family_is_maximal(m):
    # the families used in criterion 2 have the full m anticommuting members
    assert anticommuting_family(m, m).k == m
