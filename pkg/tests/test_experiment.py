"""Tests for the sampling experiment driver and its reports."""

import json
import math

import pytest

from orbitlab import (
    ConfigurationError,
    ExperimentConfig,
    ExperimentResult,
    InvalidInputError,
    base_map_from_spec,
    emit_reports,
    fit_C,
    run_experiment,
)


# -- the fitted constant --------------------------------------------------------


def test_fit_c_nothing_binds():
    assert fit_C({1: 1.0, 2: 1.0, 3: 1.2}, 1.0) == 0.0
    assert fit_C({}, 0.5) == 0.0


def test_fit_c_worked_example():
    got = fit_C({1: math.exp(-1.0), 2: math.exp(-4.0)}, 1.0)
    assert got == pytest.approx(1.0, rel=1e-12)


def test_fit_c_exact_profile():
    gammas = {n: math.exp(-float(n) ** 1.5) for n in range(1, 6)}
    assert fit_C(gammas, 0.5) == pytest.approx(1.0, rel=1e-12)


def test_fit_c_nonpositive_gamma_is_infinite():
    assert fit_C({1: 0.5, 2: 0.0}, 1.0) == math.inf
    assert fit_C({1: -0.1}, 1.0) == math.inf


def test_fit_c_infinite_gamma_is_no_constraint():
    assert fit_C({1: math.inf, 2: 0.5}, 1.0) == pytest.approx(math.log(2.0) / 4.0)


def test_fit_c_accepts_pairs_and_validates():
    assert fit_C([(1, 0.5), (2, 0.75)], 1.0) == pytest.approx(math.log(2.0))
    with pytest.raises(InvalidInputError):
        fit_C({0: 0.5}, 1.0)
    with pytest.raises(InvalidInputError):
        fit_C({1: 0.5}, -0.5)


def test_fit_c_postcondition(rng):
    for _ in range(20):
        gammas = {n: float(g) for n, g in enumerate(rng.uniform(1e-6, 1.0, 6), 1)}
        for delta in (0.1, 1.0):
            c = fit_C(gammas, delta)
            for n, g in gammas.items():
                assert g >= math.exp(-c * float(n) ** (1.0 + delta)) * (1.0 - 1e-12)


# -- configuration ---------------------------------------------------------------


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict({"map": "half", "grid": 3})


def test_config_validation():
    with pytest.raises(InvalidInputError):
        ExperimentConfig(num_samples=0)
    with pytest.raises(InvalidInputError):
        ExperimentConfig(n_max=0)
    with pytest.raises(InvalidInputError):
        ExperimentConfig(deltas=[])
    with pytest.raises(InvalidInputError):
        ExperimentConfig(deltas=[0.0])
    with pytest.raises(InvalidInputError):
        ExperimentConfig(deltas=[math.inf])
    with pytest.raises(InvalidInputError):
        ExperimentConfig(ih_c_factor=0.5)


def test_config_roundtrip():
    cfg = ExperimentConfig(
        map=[0.0, 0.5],
        brick={"family": "factorial", "tau": 0.01, "truncation_degree": 4},
        num_samples=2,
        master_seed=11,
        n_max=2,
        deltas=[0.5, 1.0],
    )
    again = ExperimentConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert again.brick_spec().sizes[1] == pytest.approx(0.01)


def test_base_map_from_spec():
    f = base_map_from_spec("half")
    assert f.evaluate(0.5) == 0.25
    g = base_map_from_spec([0.0, 0.0, 1.0])
    assert g.evaluate(0.3) == pytest.approx(0.09)
    with pytest.raises(InvalidInputError):
        base_map_from_spec("cubic")
    with pytest.raises(InvalidInputError):
        base_map_from_spec([])


# -- unperturbed experiments -------------------------------------------------------


def test_half_map_experiment_closed_form():
    cfg = ExperimentConfig(map="half", num_samples=1, n_max=3, deltas=[1.0])
    result = run_experiment(cfg)
    assert len(result.samples) == 1
    s = result.samples[0]
    assert not s.aborted
    assert s.strict_invariance
    assert [(n, count) for (n, count, _, _) in s.rows] == [(1, 1), (2, 1), (3, 1)]
    for (n, _, g, certified) in s.rows:
        assert certified
        assert g == pytest.approx(1.0 - 2.0**-n, abs=1e-10)
    (delta, c), = s.fits
    assert delta == 1.0
    assert c == pytest.approx(math.log(2.0), abs=1e-9)
    assert s.ih_status == "holds"
    assert s.ih_pass == 3
    assert s.ih_c == pytest.approx(1.5 * math.log(2.0), abs=1e-9)


def test_quadratic_experiment_oracles():
    cfg = ExperimentConfig(map="quadratic", num_samples=1, n_max=2, deltas=[1.0])
    result = run_experiment(cfg)
    s = result.samples[0]
    rows = {n: (count, g) for (n, count, g, _) in s.rows}
    assert rows[1][0] == 1
    assert rows[1][1] == pytest.approx(math.sqrt(5.0) - 2.0, abs=1e-9)
    assert rows[2][0] == 3
    assert rows[2][1] == pytest.approx(5.0 - 2.0 * math.sqrt(5.0), abs=1e-9)


# -- perturbed experiments and reports ----------------------------------------------


def brick_record():
    return {"family": "factorial", "tau": 0.01, "truncation_degree": 4}


def test_perturbed_experiment_is_deterministic(tmp_path):
    cfg = dict(
        map="half", brick=brick_record(), num_samples=3, master_seed=7, n_max=2,
        deltas=[1.0],
    )
    a = run_experiment(ExperimentConfig(**cfg))
    b = run_experiment(ExperimentConfig(**cfg))
    assert [s.to_record() for s in a.samples] == [s.to_record() for s in b.samples]

    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    emit_reports(a, str(dir_a))
    emit_reports(b, str(dir_b))
    for name in ("samples.ndjson", "table.csv", "summary.json"):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()


def test_perturbed_samples_differ_across_seeds():
    cfg = dict(map="half", brick=brick_record(), num_samples=2, n_max=1, deltas=[1.0])
    result = run_experiment(ExperimentConfig(**cfg))
    g0 = result.samples[0].rows[0][2]
    g1 = result.samples[1].rows[0][2]
    assert g0 != g1  # different seeds, different perturbations


def test_emit_reports_files(tmp_path):
    cfg = ExperimentConfig(map="half", num_samples=2, n_max=2, deltas=[1.0])
    result = run_experiment(cfg)
    summary = emit_reports(result, str(tmp_path))

    lines = (tmp_path / "samples.ndjson").read_text().strip().split("\n")
    assert len(lines) == 2
    rec = json.loads(lines[0])
    assert rec["status"] == "ok"
    assert rec["ih"]["pass"] == 2

    csv_lines = (tmp_path / "table.csv").read_text().strip().split("\n")
    assert csv_lines[0] == "sample,n,P_n,gamma_n,certified"
    assert len(csv_lines) == 1 + 2 * 2

    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk == json.loads(json.dumps(summary, default=str)) or on_disk["num_ok"] == 2
    assert summary["num_samples"] == 2
    assert summary["num_aborted"] == 0
    assert summary["all_certified"]
    assert summary["num_uncertified"] == 0
    assert summary["num_ih_failing"] == 0
    assert summary["fitted_C"]["min"] == pytest.approx(math.log(2.0), abs=1e-9)
    assert summary["fitted_C"]["median"] == summary["fitted_C"]["min"]


def test_emit_reports_empty_result(tmp_path):
    cfg = ExperimentConfig(map="half", num_samples=1, n_max=1)
    summary = emit_reports(ExperimentResult(config=cfg, samples=[]), str(tmp_path))
    assert (tmp_path / "table.csv").read_text() == "sample,n,P_n,gamma_n,certified\n"
    assert (tmp_path / "samples.ndjson").read_text() == ""
    assert summary["num_samples"] == 0
    assert summary["fitted_C"]["min"] is None


def test_csv_roundtrips_full_precision(tmp_path):
    cfg = ExperimentConfig(map="quadratic", num_samples=1, n_max=2, deltas=[1.0])
    result = run_experiment(cfg)
    emit_reports(result, str(tmp_path))
    rows = (tmp_path / "table.csv").read_text().strip().split("\n")[1:]
    parsed = [float(line.split(",")[3]) for line in rows]
    want = [g for (_, _, g, _) in result.samples[0].rows]
    assert parsed == want  # repr() round-trips doubles exactly


def test_summary_is_order_independent(tmp_path):
    cfg = ExperimentConfig(
        map="half", brick=brick_record(), num_samples=4, master_seed=3, n_max=2,
        deltas=[1.0],
    )
    result = run_experiment(cfg)
    shuffled = ExperimentResult(config=cfg, samples=list(reversed(result.samples)))
    s1 = emit_reports(result, str(tmp_path / "fwd"))
    s2 = emit_reports(shuffled, str(tmp_path / "rev"))
    assert s1 == s2
