"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Tolerances are pinned here and nowhere relaxed at runtime.
"""

import math
import time

import numpy as np
import pytest

import normlab as nl
from normlab import INF, SequenceSpace


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_gallery_norm_certificates():
    t0 = time.perf_counter()
    worst_norm = 0.0
    worst_oracle = 0.0
    cases = nl.gallery_default_cases()
    for tag, params in cases:
        T = nl.from_gallery(tag, **params)
        r = nl.opnorm(T)
        o = nl.opnorm_oracle(T, grid=100000)
        worst_norm = max(worst_norm, abs(r.value - 1.0))
        worst_oracle = max(worst_oracle, abs(r.value - o.value))
        assert abs(r.value - 1.0) <= 1e-6, (tag, params, r.value)
        assert abs(r.value - o.value) <= 1e-3, (tag, params, r.value, o.value)
    elapsed = time.perf_counter() - t0
    _report(
        1,
        elapsed <= 60.0,
        f"{len(cases)} gallery cases: |norm-1| <= {worst_norm:.2e} (tol 1e-6), "
        f"|norm-oracle| <= {worst_oracle:.2e} (tol 1e-3), runtime {elapsed:.1f}s <= 60s",
    )


def test_criterion_2_distance_constants():
    details = []
    for p in (1.5, 2.0, 3.0):
        T = nl.make_diag_beta(0.5, p, 3.0)
        na = nl.na_set(T)
        d = nl.dist_to_set(nl.unit([1, 0], T.domain), na)
        assert abs(d - 2.0 ** (1.0 / p)) <= 1e-4, (p, d)
        details.append(f"diag p={p}: {d:.6f}")
    for T, name in (
        (nl.make_rot_l1(0.5), "rot-l1"),
        (nl.make_diag_beta(0.5, 2, INF), "diag-2-inf"),
    ):
        na = nl.na_set(T)
        d = nl.dist_to_set(nl.unit([1, 0], T.domain), na)
        assert abs(d - math.sqrt(2.0)) <= 1e-4, (name, d)
        details.append(f"{name}: {d:.6f}")
    Tb = nl.make_biorth_inf(SequenceSpace(3, 2), 0.3)
    db = nl.dist_to_set(nl.unit([1, 0, 0], Tb.domain), nl.na_set(Tb))
    assert db >= 1.0 - 1e-4
    basis = nl.auerbach_2d(SequenceSpace(2, 2))
    Ta = nl.make_auerbach_yy(basis, 0.6)
    da = nl.dist_to_set(nl.unit(basis.vectors[0], Ta.domain), nl.na_set(Ta))
    assert da >= 1.0 - 1e-4
    _report(2, True, "; ".join(details) + f"; biorth {db:.4f} >= 1; auerbach {da:.4f} >= 1")


def test_criterion_3_attainment_sets():
    T = nl.make_diag_beta(0.5, 2, INF)
    na = nl.na_set(T)
    assert len(na.points) == 2
    err2 = max(
        min(T.domain.norm(p.coords - e) for p in na.points)
        for e in (np.array([0.0, 1.0]), np.array([0.0, -1.0]))
    )
    assert err2 <= 1e-4
    T4 = nl.make_rot_lq(1.0, 1.5)
    na4 = nl.na_set(T4)
    assert len(na4.points) == 4
    expected = [np.array(v, float) for v in ([1, 0], [0, 1], [-1, 0], [0, -1])]
    err4 = max(min(T4.domain.norm(p.coords - e) for p in na4.points) for e in expected)
    assert err4 <= 1e-4
    _report(
        3,
        True,
        f"diag: 2 clusters (err {err2:.1e} <= 1e-4); rotation beta=1: 4 clusters "
        f"(err {err4:.1e} <= 1e-4)",
    )


def test_criterion_4_monotonicity_certificate():
    details = []
    for q in (1.0, 1.2, 1.5, 1.9):
        rep = nl.monotonicity_certificate(q, grid=10000)
        by_name = {c.name: c for c in rep.checks}
        assert by_name["derivative_positive_on_arc"].passed, q
        fd = by_name["closed_form_matches_finite_difference"]
        assert fd.computed <= 1e-5, (q, fd.computed)
        mid = by_name["arc_midpoint_value"]
        assert abs(mid.computed - float(mid.expected)) <= 1e-10, q
        details.append(f"q={q}: minF'>0, fd {fd.computed:.1e}, mid {mid.residual:.1e}")
    _report(4, True, "; ".join(details))


def test_criterion_5_failure_mechanism_profiles():
    details = []
    for N in (3, 5, 8):
        T = nl.make_lplq_fail(2, 2, N)
        eta = nl.sbpb_profile(T, [0.9], seed=0).eta[0]
        bound = 1.0 / (2 * N) + 1e-3
        assert eta <= bound, ("lplq", N, eta, bound)
        details.append(f"lplq N={N}: eta {eta:.4f} <= {bound:.4f}")
    for N in (3, 5, 8):
        T = nl.make_block(nl.make_shrinking_blocks(N))
        eta = nl.sbpb_profile(T, [0.9], seed=0).eta[0]
        bound = 1.0 / (N + 1) + 1e-3  # the family's block gap
        assert eta <= bound, ("block", N, eta, bound)
        details.append(f"block N={N}: eta {eta:.4f} <= {bound:.4f}")
    _report(5, True, "; ".join(details))


def test_criterion_6_positive_side_batch():
    rep = nl.positive_side_batch(count=50, eps=0.25, p=3.0, q=2.0, seed=0)
    offenders = [c.name for c in rep.checks if not c.passed]
    if offenders:
        print("offending seeds:", offenders)
    etas = [c.computed for c in rep.checks]
    _report(
        6,
        rep.overall,
        f"50 random unit-norm operators (p=3, q=2): min eta(0.25) = {min(etas):.2e} > 1e-6",
    )


def test_criterion_7_functional_case_and_flat_modulus():
    details = []
    for p in (1.5, 2.0, 3.0):
        rep = nl.kim_lee_check(SequenceSpace(2, p), [0.5], functional_samples=64, seed=0)
        assert rep.min_eta[0] > 1e-6, (p, rep.min_eta)
        details.append(f"p={p}: min eta {rep.min_eta[0]:.4f} > 0")
    for p in (1.0, INF):
        rep = nl.kim_lee_check(SequenceSpace(2, p), [0.5], functional_samples=256, seed=0)
        assert rep.min_eta[0] < 0.02, (p, rep.min_eta)
        w = np.round(rep.witness_functionals[0], 4)
        details.append(f"p={p}: witness functional {w.tolist()} with eta {rep.min_eta[0]:.4f}")
    mod = nl.delta_numeric(SequenceSpace(2, 1), [2.0])
    assert mod.delta[0] <= 1e-6
    wx, wy = mod.witness_pairs[0]
    err = max(np.abs(wx - [1, 0]).max(), np.abs(wy - [0, 1]).max())
    assert err <= 1e-6
    _report(7, True, "; ".join(details) + f"; l1 delta(2) = {mod.delta[0]:.1e} at (e1,e2)")


def test_criterion_8_full_bundle_runtime_and_pass():
    t0 = time.perf_counter()
    reports = nl.run_all(seed=0)
    elapsed = time.perf_counter() - t0
    failures = [(r.tag, r.params) for r in reports if not r.overall]
    _report(
        8,
        not failures and elapsed <= 300.0,
        f"run_all: {len(reports)} reports, failures {failures}, runtime {elapsed:.1f}s <= 300s",
    )
