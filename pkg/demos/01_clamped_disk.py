"""
Vibrating clamped disk
======================

Rasterize the unit disk, assemble the clamped plate operator and watch the
lowest eigenvalue approach the Bessel-root value as the grid is refined.
"""

import numpy as np
from scipy import optimize, special

from clampedplate import build_domain, clamped_bilaplacian, lowest_eigenpairs, summarize

# the exact first eigenvalue is k^4 with k the smallest root of J0 I1 + I0 J1
root = optimize.brentq(lambda k: special.j0(k) * special.i1(k) + special.i0(k) * special.j1(k),
                       2.5, 4.0)
exact = root**4
print(f"continuum Gamma_1 = {exact:.4f}")

for h in (1 / 32, 1 / 64, 1 / 128):
    d = build_domain("disk:r=1", h)
    spec = lowest_eigenpairs(clamped_bilaplacian(d), 6, vectors=False)
    g = summarize(d)
    print(f"h=1/{round(1 / h):<4d} cells={g.cell_count:6d} area={g.volume:.4f}  "
          f"Gamma_1={spec.eigenvalues[0]:9.4f}  rel err={spec.eigenvalues[0] / exact - 1:+.3%}")

# the raster boundary is a staircase, so convergence is first order:
# halving h roughly halves the error.  The next modes come in pairs.
print("Gamma_1..6 at the finest level:", np.round(spec.eigenvalues, 2))
