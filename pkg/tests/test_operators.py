import json
import math

import numpy as np
import pytest

import normlab as nl
from normlab import INF, HypothesisError, OperatorPQ, SequenceSpace
from normlab.operators import BlockSpace, dual_attainer, norm_dual_vector
from normlab.spaces import pnorm, sample_sphere_coords


def test_apply_examples():
    I = OperatorPQ(np.eye(2), SequenceSpace(2, 2), SequenceSpace(2, 2))
    assert np.allclose(nl.apply(I, [3, 4]), [3, 4])
    D = nl.make_diag_beta(0.5, 2, 2)
    assert np.allclose(D.apply([1, 0]), [0.5, 0])
    R = nl.make_rot_l1(1.0)
    assert np.allclose(R.apply([1, 0]), [0.5, 0.5])


def test_apply_dimension_mismatch():
    I = OperatorPQ(np.eye(2), SequenceSpace(2, 2), SequenceSpace(2, 2))
    with pytest.raises(ValueError):
        I.apply([1, 2, 3])


def test_matrix_shape_and_finiteness():
    with pytest.raises(ValueError):
        OperatorPQ(np.ones((2, 3)), SequenceSpace(2, 2), SequenceSpace(2, 2))
    with pytest.raises(ValueError):
        OperatorPQ(np.array([[1.0, np.inf], [0, 1]]), SequenceSpace(2, 2), SequenceSpace(2, 2))


def test_adjoint_involution_and_exponents():
    T = nl.make_diag_beta(0.5, 1.5, 3.0)
    A = nl.adjoint(T)
    assert A.domain.p == pytest.approx(1.5)  # dual of q = 3
    assert A.range.p == pytest.approx(3.0)  # dual of p = 1.5
    AA = nl.adjoint(A)
    assert np.array_equal(AA.matrix, T.matrix)
    assert AA.domain.p == pytest.approx(T.domain.p)


def test_adjoint_norm_identity_diag():
    T = nl.make_diag_beta(0.5, 1.5, 3.0)
    v1 = nl.opnorm(T).value
    v2 = nl.opnorm(nl.adjoint(T)).value
    assert abs(v1 - v2) <= 1e-6


def test_diag_constructor_values():
    T = nl.make_diag_beta(0.5, 2, INF)
    assert pnorm(T.apply([1, 0]), INF) == pytest.approx(0.5)
    T22 = nl.make_diag_beta(0.5, 2, 2)
    assert nl.opnorm(T22).value == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(HypothesisError):
        nl.make_diag_beta(1.5, 2, 2)
    with pytest.raises(HypothesisError):
        nl.make_diag_beta(0.5, 3, 2)  # needs p <= q
    with pytest.raises(HypothesisError):
        nl.make_diag_beta(0.5, 1.0, 2)  # needs p > 1


def test_rot_l1_values():
    T = nl.make_rot_l1(0.7)
    assert pnorm(T.apply([1, 0]), 1) == pytest.approx(0.7, abs=1e-12)
    assert pnorm(T.apply([0, 1]), 1) == pytest.approx(1.0, abs=1e-12)
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(HypothesisError):
        nl.make_rot_l1(0.0)


def test_rot_lq_values_and_refusal():
    T = nl.make_rot_lq(1.0, 1.5)
    assert pnorm(T.apply([0, 1]), 1.5) == pytest.approx(1.0, abs=1e-12)
    mid = np.array([1.0, 1.0]) / math.sqrt(2.0)
    assert pnorm(T.apply(mid), 1.5) == pytest.approx(2.0 / 2.0 ** (0.5 + 1 / 1.5), abs=1e-12)
    with pytest.raises(HypothesisError):
        nl.make_rot_lq(1.0, 2.0)
    with pytest.raises(HypothesisError):
        nl.make_rot_lq(1.0, 2.5)


def test_compose_values():
    T = nl.make_compose(0.8, 1.5, 1.0)
    assert pnorm(T.apply([0, 1]), 1) == pytest.approx(1.0, abs=1e-12)
    assert pnorm(T.apply([1, 0]), 1) == pytest.approx(0.8, abs=1e-12)
    assert T.domain.p == pytest.approx(1.5)
    with pytest.raises(HypothesisError):
        nl.make_compose(0.8, 2.5, 1.0)


def test_biorth_values():
    T = nl.make_biorth_inf(SequenceSpace(3, 2), 0.3)
    assert pnorm(T.apply([1, 0, 0]), INF) == pytest.approx(0.7)
    assert pnorm(T.apply([0, 1, 0]), INF) == pytest.approx(1.0)
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(HypothesisError):
        nl.make_biorth_inf(SequenceSpace(1, 2), 0.3)


def test_auerbach_operator_reduces_to_diag():
    basis = nl.auerbach_2d(SequenceSpace(2, 2))
    T = nl.make_auerbach_yy(basis, 0.6)
    assert np.allclose(T.matrix, np.diag([0.6, 1.0]), atol=1e-12)
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)


def test_proj_padding():
    R = OperatorPQ(np.diag([0.5, 1.0]), SequenceSpace(2, 2), SequenceSpace(2, 2))
    T = nl.make_proj_then(R, 4)
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)
    x = np.array([0.3, -0.4, 0.0, 0.0])
    assert np.allclose(T.apply(x), R.apply(x[:2]))
    with pytest.raises(HypothesisError):
        nl.make_proj_then(T, 6)  # block must be 2D in domain


def test_block_mixed_norm_evaluator():
    ops = nl.make_shrinking_blocks(5)
    T = nl.make_block(ops)
    assert isinstance(T.range, BlockSpace)
    assert T.domain.dim == 10 and T.range.dim == 10
    # domain collapses to flat l_2^10: same norm exactly
    assert not isinstance(T.domain, BlockSpace)
    x = np.zeros(10)
    x[2], x[3] = 0.6, 0.8
    assert T.range.norm(T.apply(x)) == pytest.approx(
        ops[1].range.norm(ops[1].apply([0.6, 0.8])), abs=1e-15
    )
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)


def test_block_norm_matches_flat_when_uniform():
    space = BlockSpace(2.0, tuple(SequenceSpace(2, 2.0) for _ in range(3)))
    rng = np.random.default_rng(5)
    X = rng.standard_normal((6, 40))
    assert np.allclose(space.norm_cols(X), SequenceSpace(6, 2.0).norm_cols(X), atol=1e-12)


def test_lplq_values():
    T = nl.make_lplq_fail(2, 2, 3)
    e12 = np.zeros(6)
    e12[2] = 1.0  # first coordinate of block 2
    assert T.range.norm(T.apply(e12)) == pytest.approx(0.75)
    assert nl.opnorm(T).value == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(HypothesisError):
        nl.make_lplq_fail(1.0, 2, 3)
    with pytest.raises(HypothesisError):
        nl.make_lplq_fail(3, 2, 3)


def test_lplq_strict_contraction_off_even_coordinates():
    T = nl.make_lplq_fail(2, 2, 3)
    X = sample_sphere_coords(T.domain, 2048, seed=11)
    mask = np.max(np.abs(X[0::2, :]), axis=0) >= 0.1
    vals = T.range_values(X[:, mask])
    assert vals.size > 100
    assert float(vals.max()) <= 1.0 - 1e-5


def test_scaling_invariant():
    rng = np.random.default_rng(3)
    for _ in range(10):
        M = rng.standard_normal((2, 2))
        c = float(rng.normal())
        if abs(c) < 1e-3:
            c = 0.5
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        q = float(rng.choice([1.0, 2.0, INF]))
        T = OperatorPQ(M, SequenceSpace(2, p), SequenceSpace(2, q))
        Tc = OperatorPQ(c * M, SequenceSpace(2, p), SequenceSpace(2, q))
        v, vc = nl.opnorm(T).value, nl.opnorm(Tc).value
        assert vc == pytest.approx(abs(c) * v, rel=1e-9)


def test_dual_vector_and_attainer_contracts():
    rng = np.random.default_rng(9)
    spaces = [
        SequenceSpace(4, 1.0),
        SequenceSpace(4, 1.5),
        SequenceSpace(4, 2.0),
        SequenceSpace(4, INF),
        BlockSpace(2.0, (SequenceSpace(2, 2.0), SequenceSpace(2, INF))),
    ]
    for space in spaces:
        for _ in range(5):
            y = rng.standard_normal(space.dim)
            u = norm_dual_vector(space, y)
            assert float(u @ y) == pytest.approx(space.norm(y), rel=1e-10)
            z = rng.standard_normal(space.dim)
            x = dual_attainer(space, z)
            assert space.norm(x) == pytest.approx(1.0, abs=1e-10)
            # no unit vector can beat the dual-norm value <z, x>
            probe = sample_sphere_coords(space, 100, seed=1)
            assert float(z @ x) >= float(np.max(z @ probe)) - 1e-9


def test_gallery_serialization_round_trip():
    T = nl.make_diag_beta(0.5, 2, INF)
    d = T.to_json_dict()
    s = json.dumps(d)
    back = json.loads(s)
    assert back["tag"] == "DIAG-2-INF"
    assert back["q"] == "inf"
    assert np.allclose(np.asarray(back["matrix"]), T.matrix)
    assert back["params"]["beta"] == 0.5


def test_from_gallery_covers_all_tags():
    for tag in nl.GALLERY_TAGS:
        T = nl.from_gallery(tag, **dict(nl.repro.DEFAULT_PARAMS[tag]))
        assert T.gallery is not None and T.gallery.tag == tag


def test_block_without_exact_reduction_is_heuristic():
    # outer domain exponent > outer range exponent: no max-of-blocks identity
    ops = nl.make_shrinking_blocks(3)
    T = nl.make_block(ops, p_outer=INF, q_outer=2.0)
    r = nl.opnorm(T)
    assert not r.certified
    assert r.value >= 1.0 - 1e-9  # block-supported vectors already reach 1
