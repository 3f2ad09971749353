import json
from pathlib import Path

import pytest

from warpcheck import cli
from warpcheck.errors import ParseError, UsageError, ValidationError
from warpcheck.scenario import (
    Report,
    emit_report,
    parse_scenario,
    run_scenario,
    scenario_from_dict,
)

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"
FLAGSHIP = SCENARIOS / "flagship_h3_inverse_xn_r2.json"
SPHERE = SCENARIOS / "negative_sphere_fiber.json"


def minimal(**over):
    doc = {
        "schema": "warpcheck-scenario/1",
        "name": "minimal",
        "base": {"kind": "hyperbolic", "dim": 3},
        "fiber": {"kind": "flat", "dim": 2},
        "warp": {"family": "theorem2", "params": {"a": 0, "b": 1}},
        "checks": ["einstein"],
    }
    doc.update(over)
    return doc


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return p


def test_parse_minimal_fills_defaults(tmp_path):
    scn = parse_scenario(write(tmp_path, minimal()), env={})
    assert scn.sampling.count == 100 and scn.sampling.seed == 42
    assert scn.sampling.x_n_range == (0.5, 5.0) and scn.sampling.tangential_bound == 3.0
    assert scn.warp.params.b_vec == (0.0, 0.0)
    assert scn.tolerance("einstein") == 1e-8
    again = scenario_from_dict(scn.to_dict(), env={})
    assert again.to_dict() == scn.to_dict()


def test_env_seed_replaces_default_only():
    assert scenario_from_dict(minimal(), env={"WARPCHECK_SEED": "7"}).sampling.seed == 7
    explicit = minimal(sampling={"seed": 3})
    assert scenario_from_dict(explicit, env={"WARPCHECK_SEED": "7"}).sampling.seed == 3
    with pytest.raises(ValidationError):
        scenario_from_dict(minimal(), env={"WARPCHECK_SEED": "seven"})


@pytest.mark.parametrize("over, match", [
    ({"base": {"kind": "hyperbolic", "dim": 2}, "checks": ["theorem1"]}, "theorem1"),
    ({"warp": {"expression": "x1/x0"}}, "x0"),
    ({"extra": 1}, "unknown key"),
    ({"base": {"kind": "torus", "dim": 3}}, "unknown model kind"),
    ({"checks": ["einstein", "magic"]}, "unknown check"),
    ({"schema": "warpcheck-scenario/2"}, "schema"),
    ({"checks": ["pde"], "base": {"kind": "flat", "dim": 3}}, "hyperbolic"),
    ({"checks": ["corollary4"], "warp": {"expression": "1/x3"}}, "theorem2"),
    ({"warp": {"family": "theorem2", "params": {"a": 1, "b_vec": [1]}}}, "length"),
    ({"fiber": {"kind": "space_form", "dim": 1, "lambda": 2}}, "lambda"),
    ({"tolerances": {"nope": 1}}, "unknown key"),
    ({"sampling": {"count": 5, "colour": 1}}, "unknown key"),
    ({"sampling": {"x_n_range": [-1, 2]}}, "x_n_range"),
])
def test_validation_errors(over, match):
    with pytest.raises(ValidationError, match=match):
        scenario_from_dict(minimal(**over), env={})


def test_missing_key():
    doc = minimal()
    del doc["warp"]
    with pytest.raises(ValidationError, match="warp"):
        scenario_from_dict(doc, env={})


def test_malformed_json_reports_position(tmp_path):
    with pytest.raises(ParseError) as info:
        parse_scenario(write(tmp_path, '{\n  "name": "x",\n  oops\n}'))
    assert info.value.line == 3 and info.value.column == 3


def test_zero_samples_is_a_usage_error():
    scn = scenario_from_dict(minimal(sampling={"count": 0}), env={})
    with pytest.raises(UsageError):
        run_scenario(scn)


def test_flagship_run_and_text_report():
    scn = parse_scenario(FLAGSHIP, env={})
    rep = run_scenario(scn)
    assert rep.all_passed and rep.exit_status == 0
    assert rep.derived_constants["lambda"] == -4.0
    assert [c["name"] for c in rep.checks] == list(scn.checks)
    text = emit_report(rep, "text").decode()
    assert any(line.startswith("einstein") and line.endswith("PASS") for line in text.splitlines())
    assert "lambda = -4" in text


def test_negative_run_captures_failures():
    rep = run_scenario(parse_scenario(SPHERE, env={}))
    by_name = {c["name"]: c for c in rep.checks}
    assert not by_name["einstein"]["pass"]
    assert not by_name["theorem1"]["pass"]
    assert by_name["theorem1"]["details"]["residual_iv"] == pytest.approx(1.0, abs=1e-9)
    assert by_name["crosscheck"]["pass"]
    assert rep.exit_status == 1


def test_errors_are_captured_per_check():
    doc = minimal(warp={"expression": "x1"}, checks=["einstein", "pde"], sampling={"count": 5})
    rep = run_scenario(scenario_from_dict(doc, env={}))
    einstein, pde = rep.checks
    assert "DomainViolation" in einstein["error"] and not einstein["pass"]
    assert "error" not in pde and not pde["pass"]
    assert rep.exit_status == 3
    assert "ERROR" in emit_report(rep, "text").decode()


def test_json_round_trip_and_empty_checks():
    rep = run_scenario(scenario_from_dict(minimal(checks=[], sampling={"count": 3}), env={}))
    raw = emit_report(rep, "json")
    back = Report.from_dict(json.loads(raw))
    assert back == rep
    assert emit_report(back, "json") == raw
    text = emit_report(rep, "text").decode()
    assert "derived constants:" in text and "lambda = -4" in text


def test_determinism():
    a = run_scenario(parse_scenario(FLAGSHIP, env={}))
    b = run_scenario(parse_scenario(FLAGSHIP, env={}))
    a.timings = b.timings = {}
    assert emit_report(a) == emit_report(b)


def test_predicate_failure_is_reported():
    doc = minimal(checks=["corollary4"], sampling={"count": 5})
    rep = run_scenario(scenario_from_dict(doc, env={}))
    (c,) = rep.checks
    assert not c["pass"] and c["note"] == "hypothesis not met"
    assert c["residual"] <= c["tolerance"]


# --- command line --------------------------------------------------------------


def test_cli_run_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["run", str(FLAGSHIP), "--report", str(out), "--samples", "10",
                     "--tolerance", "theorem1=1e-7"])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"schema", "scenario", "derived_constants", "checks", "timings"}
    assert doc["scenario"]["sampling"]["count"] == 10
    assert doc["scenario"]["tolerances"]["theorem1"] == 1e-7
    assert "PASS" in capsys.readouterr().out


def test_cli_json_stdout_and_seed(capsys):
    assert cli.main(["run", str(FLAGSHIP), "--format", "json", "--seed", "9", "--samples", "5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scenario"]["sampling"]["seed"] == 9


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["run", str(SPHERE), "--samples", "5"]) == 1
    bad = write(tmp_path, minimal(base={"kind": "hyperbolic", "dim": 2}, checks=["theorem1"]))
    assert cli.main(["run", str(bad)]) == 2
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["run", str(write(tmp_path, "{", "broken.json"))]) == 2
    assert cli.main(["run", str(FLAGSHIP), "--samples", "0"]) == 2
    numeric = write(tmp_path, minimal(warp={"expression": "x1 - 10"}), "neg.json")
    assert cli.main(["run", str(numeric), "--samples", "3"]) == 3
    with pytest.raises(SystemExit):
        cli.main(["run", str(FLAGSHIP), "--tolerance", "bogus"])
    capsys.readouterr()


def test_cli_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("WARPCHECK_SEED", "5")
    cli.main(["run", str(FLAGSHIP), "--format", "json", "--samples", "3"])
    assert json.loads(capsys.readouterr().out)["scenario"]["sampling"]["seed"] == 5
    cli.main(["run", str(FLAGSHIP), "--format", "json", "--samples", "3", "--seed", "6"])
    assert json.loads(capsys.readouterr().out)["scenario"]["sampling"]["seed"] == 6


def test_cli_list_models_and_check_params(tmp_path, capsys):
    assert cli.main(["list-models"]) == 0
    assert "hyperbolic" in capsys.readouterr().out
    assert cli.main(["check-params", str(SCENARIOS / "corollary4_hyperbolic_fiber.json")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["corollary4"] == {"globally_positive": True, "c": -12.0, "lambda_F": -12.0}
    assert doc["corollary5"]["applies"] is False
    assert cli.main(["check-params", str(SCENARIOS / "negative_warp_xn.json")]) == 2
