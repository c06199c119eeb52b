"""Real subspaces whose minimum output entropy is not additive.

Every nonzero element of span{I, Q_1, ..., Q_{k-1}} (anticommuting, skew,
orthogonal Q_i) is a multiple of an orthogonal matrix, so its entropy is the
maximum ln m. The tensor product subspace contains (Q1 (x) Q2 + I) / sqrt(2N)
which has rank N/2, so its entropy drops by ln 2.

Run with ``python demos/real_additivity_gap.py``.
"""

import math

import numpy as np

from entropy_extrema import (OptimizerConfig, anticommuting_family, normalized_spectrum,
                             orthogonal_subspace, radon_hurwitz, real_gap_demo)

for m in (2, 4, 8, 16):
    fam = anticommuting_family(m, radon_hurwitz(m))
    K = orthogonal_subspace(fam)
    print(f"m = {m:2d}: dim K = {K.dim} (Radon-Hurwitz bound {radon_hurwitz(m)})")

demo = real_gap_demo(2, 2, cfg=OptimizerConfig(restarts=32, seed=0))
print()
print(f"H(K1)                  = {demo.h1:.12f}  (ln 2 = {math.log(2):.12f})")
print(f"H(K2)                  = {demo.h2:.12f}")
print(f"witness entropy bound  = {demo.upper_bound_h12:.12f}")
print(f"optimizer on K1 (x) K2 = {demo.optimizer_h12:.12f}")
print(f"additivity gap         >= {demo.gap:.12f}")
print("witness spectrum:", np.round(normalized_spectrum(demo.witness), 12))

print()
for m1, m2 in ((2, 4), (4, 4), (8, 8)):
    d = real_gap_demo(m1, m2, run_optimizer=False)
    print(f"m1 = {m1}, m2 = {m2}: gap >= {d.gap:.6f}")
