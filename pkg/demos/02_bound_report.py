"""
Lower bounds on four domains
============================

Compare running means of clamped plate eigenvalues with the Levine-Protter
bound and its improvement by the moment of inertia.
"""

import numpy as np

from clampedplate import build_domain, build_report, lowest_eigenpairs, summarize
from clampedplate.discretize import clamped_bilaplacian, neumann_laplacian

h = 1 / 64
for spec in ("disk:r=1", "square:a=1", "lshape:a=1,b=0.5", "annulus:r1=0.4,r2=1"):
    d = build_domain(spec, h)
    geo = summarize(d)
    plate = lowest_eigenpairs(clamped_bilaplacian(d), 25, vectors=False)
    neumann = lowest_eigenpairs(neumann_laplacian(d), 3, vectors=False)
    rep = build_report(plate, geo, neumann=neumann)
    gain = rep.column("theorem") - rep.column("levine_protter")
    print(f"{spec:22s} V={geo.volume:.4f} I={geo.inertia:.4f}")
    for k in (1, 5, 25):
        r = rep.rows[k - 1]
        print(f"   k={k:2d} mean={r['mean']:10.1f}  LP={r['levine_protter']:9.2f}  "
              f"theorem={r['theorem']:9.2f}  corollary={r['corollary']:9.2f}")
    print(f"   improvement over LP: {gain.min():.3f} .. {gain.max():.3f}, violations: "
          f"{len(rep.violations)}")

# the CSV form is what the command line tool writes
print(rep.to_csv().splitlines()[-1])
