"""Moduli of uniform convexity, the functional-case scan, and Auerbach systems.

Run:  python3 demos/04_convexity_and_auerbach.py
"""

import numpy as np

from normlab import (
    INF,
    Norm2D,
    SequenceSpace,
    auerbach_2d,
    delta_closed_form_high_p,
    delta_numeric,
    kim_lee_check,
)
from normlab.spaces import pnorm_cols

# --- delta(eps) across exponents --------------------------------------------------

eps_grid = [0.25, 0.5, 1.0, 1.5, 2.0]
print("delta(eps) = min 1 - ||(x+y)/2|| over unit pairs with ||x-y|| >= eps")
print("  p     " + "".join(f"eps={e:<9}" for e in eps_grid))
for p in (1.0, 1.5, 2.0, 3.0, INF):
    mod = delta_numeric(SequenceSpace(2, p), eps_grid)
    print(f"  {p:<5} " + "".join(f"{d:<13.6f}" for d in mod.delta))
print("  flat cases (p = 1, inf) stay at zero until the antipodal threshold;")
print("  for p >= 2 the sweep matches 1 - (1 - (eps/2)^p)^(1/p):")
for p in (2.0, 3.0):
    mod = delta_numeric(SequenceSpace(2, p), [1.0])
    print(f"    p = {p}: sweep {mod.delta[0]:.6f}  closed form {delta_closed_form_high_p(1.0, p):.6f}")

# --- functional-case modulus scan ---------------------------------------------------

print("\nmin over sampled unit functionals of eta(0.5, functional):")
for p in (1.5, 2.0, 3.0, 1.0, INF):
    rep = kim_lee_check(SequenceSpace(2, p), [0.5], functional_samples=128, seed=0)
    verdict = "positive (uniformly convex)" if rep.uniformly_convex_expected else "~ 0 (flat ball)"
    w = np.round(rep.witness_functionals[0], 4).tolist()
    print(f"  p = {p:<5} min eta = {rep.min_eta[0]:.6f}  expected {verdict};  minimizer {w}")

# --- Auerbach systems: canonical and general --------------------------------------

print("\nAuerbach systems (unit vectors + biorthogonal unit functionals):")
system = auerbach_2d(SequenceSpace(2, 3.0))
print("  l_3^2 canonical:", [v.tolist() for v in system.vectors])

sheared = Norm2D(lambda X: pnorm_cols(np.vstack([X[0] + X[1] / 2.0, X[1]]), 2.0), name="sheared")
ss = auerbach_2d(sheared)
print("  sheared euclidean norm ||(x, y)|| = ||(x + y/2, y)||_2:")
print("    vectors    ", [np.round(v, 6).tolist() for v in ss.vectors])
print("    functionals", [np.round(f, 6).tolist() for f in ss.functionals])
print(f"    biorthogonality residual {ss.biorthogonality_residual():.2e}, "
      f"norm residual {ss.norm_residual():.2e}")
