"""Scenario runner: configs, dispatch, reports, determinism, exit codes."""

import json

import pytest

from commfam import cli
from commfam.cli import (ConfigError, parse_config_text, parse_operator_spec,
                         run_scenario, scenario_from_config)
from commfam.reports import emit_report, parse_report


def make_scenario(kind, seed=1, **params):
    return scenario_from_config({"kind": kind, "seed": seed, **params})


def test_parse_config_text():
    text = """
    # a comment
    kind = grassmann
    seed = 7
    arity = 4
    dim = 6          # trailing comment
    points = [0, 1, -3]
    ratio = 2/3
    name = hello
    empty = []
    """
    out = parse_config_text(text)
    assert out["kind"] == "grassmann"
    assert out["seed"] == 7
    assert out["points"] == [0, 1, -3]
    assert out["ratio"] == "2/3"
    assert out["name"] == "hello"
    assert out["empty"] == []


def test_parse_config_rejects_bad_lines():
    with pytest.raises(ConfigError):
        parse_config_text("just some words")
    with pytest.raises(ConfigError):
        parse_config_text("= 3")


def test_scenario_validation():
    with pytest.raises(ConfigError):
        scenario_from_config({"seed": 1})
    with pytest.raises(ConfigError):
        scenario_from_config({"kind": "no-such-kind", "seed": 1})
    with pytest.raises(ConfigError):
        scenario_from_config({"kind": "grassmann", "seed": 1})  # arity required
    with pytest.raises(ConfigError):
        scenario_from_config({"kind": "grassmann", "seed": 1, "arity": 2,
                              "bogus": 5})
    with pytest.raises(ConfigError):
        scenario_from_config({"kind": "grassmann", "arity": 2})  # seed required
    s = scenario_from_config({"kind": "grassmann", "seed": 1, "arity": 2})
    assert s.params["dim"] == 6 and s.params["trials"] == 100


def test_parse_operator_spec():
    d1 = parse_operator_spec("d1")
    assert d1.order() == 1 and d1 == parse_operator_spec("d")
    d2 = parse_operator_spec("d2")
    assert d2.order() == 2
    zd = parse_operator_spec("z*d1+1/2")
    assert zd.order() == 1
    assert (0,) in zd.coeffs and (1,) in zd.coeffs
    with pytest.raises(ConfigError):
        parse_operator_spec("e3")
    with pytest.raises(ConfigError):
        parse_operator_spec("d0")


SMOKE = [
    ("skew-matrix", {"size": 4, "trials": 2}),
    ("corollary-legs", {"n": 2, "d": 2, "trials": 2}),
    ("corollary-legs", {"n": 2, "d": 2, "trials": 2, "legs": "constant"}),
    ("identity-suite", {"n": 2, "d": 2, "trials": 2}),
    ("poisson-classical", {"n": 2, "trials": 2}),
    ("grassmann", {"arity": 3, "dim": 5, "trials": 3}),
    ("hyperplane", {"g": 2, "trials": 3}),
    ("cone-p1", {"trials": 2}),
    ("dual-number", {"n": 2, "trials": 3, "family_every": 3}),
    ("weyl-rational", {"N": 2, "T": "d1", "trials": 2}),
    ("weyl-basis", {"N": 2, "trials": 1}),
    ("hbar-localization", {"f": "x", "M": 3, "trials": 2}),
]


@pytest.mark.parametrize("kind,params", SMOKE, ids=[f"{k}-{i}" for i, (k, _) in enumerate(SMOKE)])
def test_every_scenario_kind_passes(kind, params):
    report = run_scenario(make_scenario(kind, **params))
    assert report.checks, "scenario produced no checks"
    assert report.all_passed(), [c for c in report.checks if c.status != "pass"]
    assert report.version


def test_report_round_trip(tmp_path):
    report = run_scenario(make_scenario("grassmann", arity=2, dim=4, trials=3))
    path = tmp_path / "report.json"
    emit_report(report, path)
    back = parse_report(path)
    assert back == report


def test_emit_report_unwritable_path(tmp_path):
    report = run_scenario(make_scenario("grassmann", arity=2, dim=4, trials=1))
    with pytest.raises(OSError):
        emit_report(report, tmp_path / "no-such-dir" / "report.json")


def test_empty_report_round_trip(tmp_path):
    from commfam.reports import Report
    empty = Report(scenario={"kind": "grassmann", "params": {}, "seed": 0},
                   seed=0, checks=[], duration_ms=0, version="0.1.0")
    path = tmp_path / "empty.json"
    emit_report(empty, path)
    assert parse_report(path) == empty


def test_report_determinism_modulo_duration():
    s = make_scenario("poisson-classical", n=2, trials=3, seed=9)
    a = run_scenario(s)
    b = run_scenario(s)
    a.duration_ms = b.duration_ms = 0
    assert a.to_json() == b.to_json()


def test_jobs_preserve_records():
    s = make_scenario("grassmann", arity=2, dim=4, trials=6, seed=5)
    serial = run_scenario(s, jobs=1)
    parallel = run_scenario(s, jobs=2)
    serial.duration_ms = parallel.duration_ms = 0
    assert serial.to_json() == parallel.to_json()


def test_every_check_has_anchor():
    report = run_scenario(make_scenario("identity-suite", n=2, d=2, trials=1))
    for check in report.checks:
        assert check.anchor


def test_failing_scenario_reports_witness_and_exit_code(tmp_path):
    # bound = 0 makes every hyperplane draw degenerate: the scenario must
    # surface the failure (with the resample log), never pass silently
    cfg = tmp_path / "degenerate.conf"
    cfg.write_text("kind = hyperplane\nseed = 2\ng = 2\ntrials = 1\nbound = 0\n")
    out = tmp_path / "report.json"
    code = cli.main(["run", str(cfg), "--out", str(out)])
    assert code == 1
    report = parse_report(out)
    assert not report.all_passed()
    failing = [c for c in report.checks if c.status == "fail"]
    assert failing and failing[0].witness


def test_main_run_and_exit_codes(tmp_path):
    cfg = tmp_path / "ok.conf"
    cfg.write_text("kind = grassmann\nseed = 3\narity = 2\ndim = 4\ntrials = 2\n")
    assert cli.main(["run", str(cfg)]) == 0
    bad = tmp_path / "bad.conf"
    bad.write_text("kind = grassmann\nseed = 3\n")
    assert cli.main(["run", str(bad)]) == 2


def test_main_seed_and_trials_overrides(tmp_path):
    cfg = tmp_path / "ok.conf"
    cfg.write_text("kind = grassmann\nseed = 3\narity = 2\ndim = 4\ntrials = 2\n")
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert cli.main(["run", str(cfg), "--seed", "8", "--trials", "4",
                     "--out", str(out1)]) == 0
    assert cli.main(["run", str(cfg), "--seed", "8", "--trials", "4",
                     "--out", str(out2)]) == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    assert a["seed"] == 8
    assert len(a["checks"]) == 4
    a["duration_ms"] = b["duration_ms"] = 0
    assert a == b


def test_list_scenarios(capsys):
    assert cli.main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for kind in cli.SCENARIO_PARAMS:
        assert kind in out


def test_verify_all_scenario_list_covers_all_kinds():
    kinds = {s.kind for s in cli.verify_all_scenarios()}
    assert kinds == set(cli.SCENARIO_PARAMS)
