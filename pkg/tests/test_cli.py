import json

import numpy as np
import pytest

from normlab import cli
from normlab.repro import CheckRecord, ReproReport


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_opnorm_matrix_string(capsys):
    code, out, _ = run_cli(
        capsys, "opnorm", "--p", "2", "--q", "inf", "--matrix", "0.5,0;0,1"
    )
    assert code == 0
    data = json.loads(out)
    assert data["value"] == pytest.approx(1.0, abs=1e-8)
    tops = sorted(round(w[1]) for w in data["witnesses"])
    assert tops == [-1, 1]
    assert data["certified"] is True


def test_opnorm_gallery_tag(capsys):
    code, out, _ = run_cli(capsys, "opnorm", "--tag", "ROT-2-1", "--beta", "0.7")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-8)


def test_opnorm_matrix_file(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[0.5, 0.0], [0.0, 1.0]]))
    code, out, _ = run_cli(capsys, "opnorm", "--matrix-file", str(path))
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(1.0, abs=1e-8)


def test_na_command(capsys):
    code, out, _ = run_cli(capsys, "na", "--tag", "DIAG-2-INF", "--beta", "0.5")
    assert code == 0
    data = json.loads(out)
    assert len(data["points"]) == 2


def test_eta_csv(capsys):
    code, out, _ = run_cli(
        capsys, "eta", "--tag", "LPLQ-FAIL-N", "--blocks", "3", "--p", "2", "--q", "2",
        "--eps", "0.9", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "epsilon,rho,eta"
    eps, rho, eta = (float(v) for v in lines[1].split(","))
    assert eps == 0.9
    assert eta <= 1 / 6 + 1e-3


def test_delta_csv(capsys):
    code, out, _ = run_cli(capsys, "delta", "--p", "1", "--eps", "2.0", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "epsilon,delta"
    assert float(lines[1].split(",")[1]) <= 1e-6


def test_auerbach_command(capsys):
    code, out, _ = run_cli(capsys, "auerbach", "--p", "3")
    assert code == 0
    data = json.loads(out)
    assert np.allclose(data["vectors"], np.eye(2))


def test_gallery_lists_all_tags(capsys):
    code, out, _ = run_cli(capsys, "gallery")
    assert code == 0
    data = json.loads(out)
    from normlab import GALLERY_TAGS

    assert set(data) == set(GALLERY_TAGS)
    for info in data.values():
        assert "params" in info and "claim" in info


def test_repro_success_exit_zero(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "repro", "--tag", "DIAG-P-Q", "--p", "1.5", "--q", "3", "--beta", "0.5",
        "--write-reports", "--report-dir", str(tmp_path),
    )
    assert code == 0
    data = json.loads(out)
    by_name = {c["name"]: c for c in data[0]["checks"]}
    assert by_name["dist_e1_to_attainment"]["computed"] == pytest.approx(
        2 ** (1 / 1.5), abs=1e-4
    )
    assert (tmp_path / "DIAG-P-Q.json").exists()
    assert (tmp_path / "index.csv").exists()


def test_repro_hypothesis_violation_exit_two(capsys):
    code, _, err = run_cli(capsys, "repro", "--tag", "ROT-2-Q", "--q", "2", "--beta", "1.0")
    assert code == 2
    assert "q" in err and err.strip().startswith("error:")


def test_repro_check_failure_exit_one(capsys, monkeypatch):
    failing = ReproReport(
        tag="DIAG-2-2",
        params={"beta": 0.5},
        checks=[CheckRecord("operator_norm_is_one", 1.0, 0.5, 1e-6, False)],
        overall=False,
        runtime_ms=1,
        seed=0,
    )
    monkeypatch.setattr(cli.repro_mod, "reproduce", lambda *a, **k: failing)
    code, out, _ = run_cli(capsys, "repro", "--tag", "DIAG-2-2")
    assert code == 1


def test_usage_errors_exit_two(capsys):
    code, _, err = run_cli(capsys, "opnorm", "--p", "2", "--q", "2")
    assert code == 2  # neither --matrix nor --matrix-file
    code, _, err = run_cli(capsys, "opnorm", "--matrix", "1,0;0,1", "--p", "0.5")
    assert code == 2  # invalid exponent
    with pytest.raises(SystemExit) as exc:
        cli.main(["not-a-command"])
    assert exc.value.code == 2


def test_seed_determinism_bytes(capsys):
    args = ["eta", "--tag", "DIAG-2-2", "--beta", "0.9", "--eps", "1.0", "--seed", "4"]
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
