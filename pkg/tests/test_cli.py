"""Smoke tests for the command-line front end."""

import json

import pytest

from orbitlab.cli import main


def test_gamma_command(capsys):
    rc = main(["gamma", "--matrix", "2,0;0,2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "gamma =" in out
    value = float(out.split("gamma =")[1].split()[0])
    assert value == pytest.approx(1.0, abs=1e-9)
    assert "certified tolerance" in out


def test_census_command(capsys):
    rc = main(["census", "--preset", "quadratic", "--period", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "count = 3" in out
    assert "certified: True" in out
    assert "gamma_n" in out


def test_census_json_output(capsys):
    rc = main(["census", "--preset", "half", "--period", "1", "--json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 1
    assert payload["certified"] is True
    assert payload["points"][0]["gap"] == pytest.approx(0.5, abs=1e-10)
    assert payload["points"][0]["location"] == pytest.approx(0.0, abs=1e-10)


def test_perturb_close_command(capsys):
    rc = main(
        ["perturb", "close", "--coeffs", "0,2", "--x0", "0.1", "--period", "2"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "u = -3" in out
    residual = float(out.split("=")[-1])
    assert residual < 1e-12


def test_perturb_hyp_command(capsys):
    rc = main(
        ["perturb", "hyp", "--preset", "identity", "--x0", "0.0", "--period", "1",
         "--gamma", "0.1"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "v = 0.11" in out
    gap = float(out.split("gap =")[1].split()[0])
    assert gap > 0.1


def test_sample_command(capsys):
    rc = main(["sample", "--family", "factorial", "--tau", "0.1", "--degree", "4",
               "--seed", "3"])
    assert rc == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["brick"]["family"] == "factorial"
    assert rec["dim"] == 1
    assert len(rec["components"]) == 5


def test_grid_table_command(capsys):
    rc = main(["grid", "table", "--periods", "3", "--m-bound", "2", "--c", "1",
               "--delta", "0.1"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "gamma_n" in out
    assert "0.367879" in out
    assert len(out.strip().splitlines()) == 4


def test_grid_enumerate_command(capsys):
    rc = main(["grid", "enumerate", "--preset", "half", "--period", "3",
               "--spacing", "0.1", "--slack", "0.01", "--start", "0.8"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "count = 1" in out
    assert "(8, 4, 2)" in out
    assert "partial: False" in out


def test_experiment_command(tmp_path, capsys):
    cfg = {"map": "half", "num_samples": 1, "n_max": 2, "deltas": [1.0]}
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    rc = main(["experiment", "--config", str(cfg_path), "--out", str(out_dir)])
    assert rc == 0
    for name in ("samples.ndjson", "table.csv", "summary.json"):
        assert (out_dir / name).exists()
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["num_ok"] == 1
    assert summary["num_aborted"] == 0


def test_cli_reports_domain_errors(capsys):
    rc = main(["census", "--preset", "quadratic", "--period", "0"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_cli_rejects_nonsquare_matrix(capsys):
    rc = main(["gamma", "--matrix", "1,2;3,4;5,6"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
