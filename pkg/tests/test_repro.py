import csv
import json

import pytest

import normlab as nl
from normlab import HypothesisError
from normlab.repro import DEFAULT_PARAMS, gallery_default_cases


def _strip_runtime(d):
    if isinstance(d, dict):
        return {k: _strip_runtime(v) for k, v in d.items() if k != "runtime_ms"}
    if isinstance(d, list):
        return [_strip_runtime(v) for v in d]
    return d


def test_reproduce_diag_pq():
    rep = nl.reproduce("DIAG-P-Q", {"beta": 0.5, "p": 1.5, "q": 3.0})
    assert rep.overall
    by_name = {c.name: c for c in rep.checks}
    assert by_name["dist_e1_to_attainment"].computed == pytest.approx(2 ** (1 / 1.5), abs=1e-4)
    assert by_name["operator_norm_is_one"].passed
    assert by_name["attainment_cluster_count"].computed == 2


def test_reproduce_rot_refusal_at_q2():
    with pytest.raises(HypothesisError) as err:
        nl.reproduce("ROT-2-Q", {"beta": 1.0, "q": 2.0})
    assert "q" in str(err.value)


def test_reproduce_refusals_outside_hypotheses():
    with pytest.raises(HypothesisError):
        nl.reproduce("DIAG-P-Q", {"beta": 1.5, "p": 1.5, "q": 3.0})
    with pytest.raises(HypothesisError):
        nl.reproduce("COMPOSE-P-Q", {"beta": 0.5, "p": 2.5, "q": 1.0})
    with pytest.raises(HypothesisError):
        nl.reproduce("LPLQ-FAIL-N", {"p": 3.0, "q": 2.0, "blocks": 3})
    with pytest.raises(HypothesisError):
        nl.reproduce("NOT-A-TAG")


def test_reproduce_lplq_per_block_witnesses():
    rep = nl.reproduce("LPLQ-FAIL-N", {"p": 2.0, "q": 2.0, "blocks": 5})
    assert rep.overall
    by_name = {c.name: c for c in rep.checks}
    for n in range(1, 6):
        c = by_name[f"value_at_block_{n}_first_axis"]
        assert c.computed == pytest.approx(1 - 1 / (2 * n), abs=1e-9)
    assert by_name["near_attainers_far_from_attainment"].computed >= 1.0 - 1e-3
    assert by_name["eta_vanishes_with_depth"].computed <= 1 / 10 + 1e-3


def test_reproduce_block_bound():
    rep = nl.reproduce("BLOCK-N", {"blocks": 3})
    assert rep.overall
    by_name = {c.name: c for c in rep.checks}
    assert by_name["eta_vanishes_with_depth"].computed <= 1 / 4 + 1e-3


def test_reproduce_every_tag_default_params():
    for tag in nl.GALLERY_TAGS:
        rep = nl.reproduce(tag, dict(DEFAULT_PARAMS[tag]))
        assert rep.overall, (tag, [c.name for c in rep.checks if not c.passed])


def test_reports_reproducible_across_runs():
    a = nl.reproduce("DIAG-2-2", {"beta": 0.5}, seed=3)
    b = nl.reproduce("DIAG-2-2", {"beta": 0.5}, seed=3)
    da, db = a.to_json_dict(), b.to_json_dict()
    assert _strip_runtime(da) == _strip_runtime(db)


def test_monotonicity_certificate_all_q():
    for q in (1.0, 1.2, 1.5, 1.9):
        rep = nl.monotonicity_certificate(q)
        assert rep.overall
        names = {c.name for c in rep.checks}
        assert "derivative_positive_on_arc" in names
        assert "closed_form_matches_finite_difference" in names
        assert "arc_midpoint_value" in names
        assert "pointwise_kink_bound_margin" in rep.diagnostics
    with pytest.raises(HypothesisError):
        nl.monotonicity_certificate(2.0)
    with pytest.raises(HypothesisError):
        nl.monotonicity_certificate(0.8)


def test_positive_side_batch_names_carry_seeds():
    rep = nl.positive_side_batch(count=5, seed=12)
    assert rep.overall
    assert [c.name for c in rep.checks] == [f"eta_positive_seed_{12 + i}" for i in range(5)]


def test_coverage_every_gallery_tag_in_default_bundle():
    tags = {tag for tag, _ in gallery_default_cases()}
    assert tags == set(nl.GALLERY_TAGS)


def test_run_all_writes_reports(tmp_path):
    reports = nl.run_all(seed=0, tags=["DIAG-2-2", "ROT-2-1"], out_dir=str(tmp_path))
    assert all(r.overall for r in reports)
    assert (tmp_path / "DIAG-2-2.json").exists()
    assert (tmp_path / "ROT-2-1.json").exists()
    with open(tmp_path / "index.csv", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["tag", "params", "overall", "worst_check_residual", "runtime_ms"]
    assert len(rows) == len(reports) + 1
    with open(tmp_path / "DIAG-2-2.json") as f:
        data = json.load(f)
    back = nl.ReproReport.from_json_dict(data[0])
    assert back.tag == "DIAG-2-2"
    assert back.overall


def test_run_all_single_tag_filter():
    reports = nl.run_all(seed=0, tags=["ROT-2-1"])
    assert {r.tag for r in reports} == {"ROT-2-1"}
    assert len(reports) == sum(1 for t, _ in gallery_default_cases() if t == "ROT-2-1")


def test_report_json_round_trip():
    rep = nl.reproduce("ROT-2-1", {"beta": 0.5})
    back = nl.ReproReport.from_json_dict(rep.to_json_dict())
    assert back.tag == rep.tag
    assert back.overall == rep.overall
    assert [c.name for c in back.checks] == [c.name for c in rep.checks]
    assert back.worst_residual == pytest.approx(rep.worst_residual)
