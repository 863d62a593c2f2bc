"""
The moment lemma on random profiles
===================================

Draw non-increasing piecewise-linear profiles with bounded slope and check
both moment inequalities with closed-form integrals.
"""

import numpy as np

from clampedplate.lemma_lab import ProfileSpec, run_suite, verify_lemma_case

# the tent 1 - s is the textbook case
tent = ProfileSpec(np.array([0.0, 1.0]), np.array([1.0, 0.0]), b=1, eta=1, d=0.7)
v = verify_lemma_case(tent)
print(f"tent: int s^4 psi = {v.lhs_25:.6f} >= {v.rhs_25:.6f};  "
      f"int s^2 psi = {v.lhs_26:.6f} >= {v.rhs_26:.6f}")

verdicts, summary = run_suite(1000, seed=42)
tight = min(verdicts, key=lambda v: v.lhs_25 / v.rhs_25)
print(f"{summary['passed']} of {summary['cases']} profiles satisfy both inequalities")
print(f"tightest case: lhs/rhs = {tight.lhs_25 / tight.rhs_25:.5f} (b={tight.b:.3g}, "
      f"eta={tight.eta:.3g}, ratio={tight.ratio:.3f})")
