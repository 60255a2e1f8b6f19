"""Certified p->q operator norms: sweeps, multistart, and the grid oracle.

Run:  python3 demos/02_operator_norm_certificates.py
"""

import numpy as np

from normlab import (
    INF,
    OperatorPQ,
    SequenceSpace,
    adjoint,
    make_diag_beta,
    make_lplq_fail,
    opnorm,
    opnorm_oracle,
)

# --- a 2D certificate ---------------------------------------------------------

T = make_diag_beta(0.5, 2, INF)
r = opnorm(T)
print("diag(0.5, 1): l_2^2 -> l_inf^2")
print(f"  value = {r.value!r}   interval = [{r.lower_bound!r}, {r.upper_bound!r}]")
print(f"  method = {r.method}, certified = {r.certified}, evaluations = {r.n_evals}")
print("  witnesses:", [w.coords.round(8).tolist() for w in r.witnesses])

o = opnorm_oracle(T, grid=100000)
print(f"  independent oracle (1e5 grid): {o.value!r}  (difference {abs(o.value - r.value):.2e})")

# --- corners of the max-norm ball ----------------------------------------------

I = OperatorPQ(np.eye(2), SequenceSpace(2, INF), SequenceSpace(2, 1))
ri = opnorm(I)
print("\nidentity: l_inf^2 -> l_1^2")
print(f"  value = {ri.value!r} (attained at the corners)")
print("  witnesses:", [w.coords.round(8).tolist() for w in ri.witnesses])

# --- duality: the transpose between dual exponents has the same norm ------------

rng = np.random.default_rng(0)
M = rng.standard_normal((3, 3))
T3 = OperatorPQ(M, SequenceSpace(3, 1.5), SequenceSpace(3, 3.0))
v = opnorm(T3, seed=1)
va = opnorm(adjoint(T3), seed=2)
print("\nrandom 3x3 between l_1.5 and l_3:")
print(f"  ||T||      = {v.value!r}  (multistart, certified = {v.certified})")
print(f"  ||T^t||    = {va.value!r}  between the dual exponents")
print(f"  difference = {abs(v.value - va.value):.2e}")

# --- p = 1 domains reduce to the best column ------------------------------------

T1 = OperatorPQ(M, SequenceSpace(3, 1.0), SequenceSpace(3, 2.0))
col = max(np.linalg.norm(M[:, j]) for j in range(3))
print("\nl_1 domain: norm equals the largest column norm")
print(f"  optimizer: {opnorm(T1).value!r}   max column: {col!r}")

# --- block-diagonal structures certify through their 2D blocks -------------------

TB = make_lplq_fail(2, 2, 5)
rb = opnorm(TB)
print("\nblock diagonal of diag(1 - 1/(2n), 1), n = 1..5, on l_2^10:")
print(f"  value = {rb.value!r}, certified = {rb.certified}")
print(f"  note: {rb.notes}")
