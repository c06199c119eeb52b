"""When is the second derivative of the entropy infinite?

For rank-deficient x, write (x, y) in the block form aligned with the SVD of
x. The second derivative is finite exactly when the block y22 (kernel rows,
kernel columns) vanishes. Finite differences show the divergence as a
``-ln eps`` growth.

Run with ``python demos/divergent_second_derivative.py``.
"""

import numpy as np

from entropy_extrema import (canonical_blocks, finite_difference_derivative, normalize,
                             second_derivative_finite, vn_entropy)
from entropy_extrema.entropy import sphere_path

x = normalize(np.diag([1.0, 0.0]))
cases = {
    "y in y22": np.array([[0.0, 0.0], [0.0, 1.0]]),
    "y in y12": np.array([[0.0, 1.0], [0.0, 0.0]]),
    "y mixed": normalize(np.array([[0.0, 1.0], [0.0, 0.3]])),
}
g = {}
for name, y in cases.items():
    b = canonical_blocks(x, y)
    fd = finite_difference_derivative(vn_entropy, x, y, 2)
    print(f"{name:9s} |y22| = {np.abs(b.y22).max():.2f}  finite = {second_derivative_finite(x, y)}"
          f"  diverging = {fd.diverging}  D2 estimate = {fd.value:.4f}")
    g[name] = sphere_path(vn_entropy, x, y)

print()
print("central differences along y in y22 grow like -4 ln eps:")
f, prev = g["y in y22"], None
for eps in (1e-1, 1e-2, 1e-3, 1e-4):
    d2 = (f(eps) - 2 * f(0) + f(-eps)) / eps ** 2
    step = "" if prev is None else f"   increase {d2 - prev:.3f} (4 ln 10 = {4 * np.log(10):.3f})"
    print(f"  eps = {eps:.0e}: {d2:9.3f}{step}")
    prev = d2
