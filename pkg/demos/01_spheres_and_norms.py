"""Tour of the l_p geometry primitives: norms, duality, sphere parametrization.

Run:  python3 demos/01_spheres_and_norms.py
"""

import math

import numpy as np

from normlab import INF, SequenceSpace, dual_exponent, pnorm, sphere_point_2d, sphere_sample

# --- norms across exponents ------------------------------------------------

x = np.array([3.0, -4.0, 12.0])
print("vector:", x.tolist())
for p in (1.0, 1.5, 2.0, 3.0, INF):
    print(f"  ||x||_{p:<4} = {pnorm(x, p):.6f}")

# max-factoring keeps large exponents finite
huge = np.array([1e200, 5e199])
print("\noverflow-safe:  ||(1e200, 5e199)||_50 =", pnorm(huge, 50))

# --- duality ----------------------------------------------------------------

print("\nconjugate exponents (1/p + 1/p' = 1):")
for p in (1.0, 1.5, 2.0, 4.0, INF):
    pd = dual_exponent(p)
    print(f"  p = {p:<4}  p' = {pd:<18}  dual(dual(p)) = {dual_exponent(pd)}")

# --- unit spheres, one parametrization for every p ---------------------------

print("\nsphere points x(theta) for theta = pi/4:")
for p in (1.0, 1.5, 2.0, 3.0, INF):
    v = sphere_point_2d(math.pi / 4, p)
    print(f"  p = {p:<4} x = ({v.coords[0]:+.6f}, {v.coords[1]:+.6f})  ||x||_p = {pnorm(v.coords, p):.12f}")

# quarter turns land on the axes for every exponent, including the square
for p in (1.0, 2.0, INF):
    pts = [sphere_point_2d(k * math.pi / 2, p).coords.round(12).tolist() for k in range(4)]
    print(f"  p = {p:<4} quarter turns -> {pts}")

# --- deterministic sampling ---------------------------------------------------

space = SequenceSpace(4, 3.0)
a = sphere_sample(space, 3, seed=7)
b = sphere_sample(space, 3, seed=7)
print("\nseeded samples on the l_3^4 sphere (identical across runs):")
for u, v in zip(a, b):
    assert np.array_equal(u.coords, v.coords)
    print("  ", u.coords.round(4).tolist(), " norm:", f"{pnorm(u.coords, 3.0):.12f}")
