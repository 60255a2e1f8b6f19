"""Norm-attaining sets, distance constants, and the modulus profile eta(eps, T).

The profile answers: how well can a unit vector be mapped while staying
eps-far from every maximizer?  A positive eta at every eps is exactly the
pointwise strong approximation property for the fixed operator; the gallery
families drive eta to zero as their parameter tightens.

Run:  python3 demos/03_attainment_and_modulus.py
"""

from normlab import (
    INF,
    dist_to_set,
    make_diag_beta,
    make_lplq_fail,
    make_rot_lq,
    na_set,
    sbpb_profile,
    sbpb_witness,
    unit,
)

# --- attainment sets of the 2D constructions ------------------------------------

T = make_diag_beta(0.5, 1.5, 3.0)
na = na_set(T)
print("diag(0.5, 1): l_1.5^2 -> l_3^2")
print("  attainment set:", [p.coords.round(8).tolist() for p in na.points])
e1 = unit([1, 0], T.domain)
print(f"  dist(e1, NA) = {dist_to_set(e1, na):.8f}   (2^(1/p) = {2**(1/1.5):.8f})")

R = make_rot_lq(1.0, 1.5)
nar = na_set(R)
print("\nrotation at beta = 1 into l_1.5: attains exactly at the four axes")
print("  ", [p.coords.round(8).tolist() for p in nar.points])

# --- the modulus profile for the diagonal family ---------------------------------

print("\neta(eps) for diag(beta, 1): l_2^2 -> l_inf^2")
eps_grid = [0.25, 0.5, 1.0, 1.4]
header = "  beta    " + "".join(f"eps={e:<8}" for e in eps_grid)
print(header)
for beta in (0.5, 0.9, 0.99):
    T = make_diag_beta(beta, 2, INF)
    prof = sbpb_profile(T, eps_grid)
    row = "".join(f"{h:<12.6f}" for h in prof.eta)
    print(f"  {beta:<6}  {row}")
print("  (eta(eps) <= 1 - beta once eps <= sqrt(2): e1 itself stays feasible)")

# --- witness search: exhibiting the failure point --------------------------------

eta0 = 0.2
T = make_diag_beta(1.0 - eta0 / 2.0, 2, INF)
w = sbpb_witness(T, 1.0, eta0)
print(f"\ncontraction 1 - eta/2 with eta = {eta0}: witness against (eps=1, eta) ->",
      None if w is None else w.coords.round(8).tolist())
print("  demanding less than the computed modulus finds nothing:",
      sbpb_witness(T, 1.0, 0.5 * (1.0 - T.matrix[0, 0])))

# --- the failing l_p -> l_q truncations -------------------------------------------

print("\neta(0.9) for the block family diag(1 - 1/(2n), 1), truncated at N blocks:")
for N in (3, 5, 8):
    T = make_lplq_fail(2, 2, N)
    prof = sbpb_profile(T, [0.9])
    print(f"  N = {N}: eta = {prof.eta[0]:.6f}   (<= 1/(2N) = {1/(2*N):.6f}; vanishes with depth)")
