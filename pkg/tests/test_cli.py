"""Scenario files and the command-line front end.

Exit-code contract: 0 when every check passes, 1 when any check fails,
2 for usage or configuration trouble (the run never started).  JSON
output must be byte-stable for a fixed seed because reports get diffed
across CI runs.  Wall-clock chatter goes to stderr only.
"""

import json

import pytest

from twogauge import cli
from twogauge.errors import ConfigError
from twogauge.scenario import (
    find_scenario,
    load_scenario,
    scenario_from_dict,
    serialize_scenario,
    shipped_scenarios,
)


# ---------------------------------------------------------------- loading


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def test_empty_file_reports_missing_module(tmp_path):
    path = _write(tmp_path, "empty.scn", "")
    with pytest.raises(ConfigError) as exc:
        load_scenario(path)
    assert "missing crossed_module" in str(exc.value)


def test_malformed_json_rejected(tmp_path):
    path = _write(tmp_path, "bad.scn", "{this is not json")
    with pytest.raises(ConfigError):
        load_scenario(path)


def test_top_level_must_be_an_object(tmp_path):
    path = _write(tmp_path, "list.scn", "[1, 2, 3]")
    with pytest.raises(ConfigError):
        load_scenario(path)


def test_unknown_keys_flagged_by_name(tmp_path):
    path = _write(tmp_path, "extra.scn",
                  {"crossed_module": "CONJ(S3)", "wibble": 1})
    with pytest.raises(ConfigError) as exc:
        load_scenario(path)
    assert "wibble" in str(exc.value)


def test_all_errors_collected_in_one_pass(tmp_path):
    # One load should surface every problem, not bail at the first.
    doc = {"crossed_module": "CONJ(S3)", "dim": -2, "seed": "soon",
           "tolerances": {"bogus": 1e-3}, "wibble": 1}
    path = _write(tmp_path, "multi.scn", doc)
    with pytest.raises(ConfigError) as exc:
        load_scenario(path)
    assert len(exc.value.errors) >= 4


def test_form_in_wrong_algebra_gets_one_clear_diagnostic(tmp_path):
    doc = {"crossed_module": "CONJ(SU2)", "dim": 2,
           "forms": {"A": {"algebra": "fiber", "degree": 1,
                           "components": {}}}}
    path = _write(tmp_path, "swapped.scn", doc)
    with pytest.raises(ConfigError) as exc:
        load_scenario(path)
    messages = [e for e in exc.value.errors if "must take values" in e]
    assert len(messages) == 1
    assert "base algebra" in messages[0]


def test_shipped_scenarios_resolve_by_basename(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    scn = load_scenario("abelian.scn")
    assert scn.module.name == "GERBE(U1)"
    assert find_scenario("abelian.scn").endswith("abelian.scn")


def test_every_shipped_scenario_round_trips():
    names = shipped_scenarios()
    assert len(names) >= 9
    for name in names:
        scn = load_scenario(name)
        text = serialize_scenario(scn)
        again = scenario_from_dict(json.loads(text), name=scn.name)
        assert again == scn, name


def test_round_trip_through_a_file(tmp_path):
    scn = load_scenario("su2_charts.scn")
    path = tmp_path / "copy.scn"
    path.write_text(serialize_scenario(scn))
    again = load_scenario(str(path))
    assert again.to_dict() == scn.to_dict()


# ---------------------------------------------------------------- exit codes


PASSING = [
    ["validate", "--scenario", "abelian.scn"],
    ["interchange", "--scenario", "abelian.scn"],
    ["holonomy-path", "--scenario", "su2_charts.scn"],
    ["holonomy-surface", "--scenario", "su2_charts.scn"],
    ["fake-curvature", "--scenario", "kernel3d.scn"],
    ["transitions", "--scenario", "su2_charts.scn"],
    ["cocycle", "--scenario", "s3_cocycle.scn"],
    ["classify", "--scenario", "flip_census.scn"],
]

FAILING = [
    ["interchange", "--scenario", "eh_probe.scn"],
    ["cocycle", "--scenario", "corrupted_s3.scn"],
    ["fake-curvature", "--scenario", "su2_nonflat.scn"],
    ["holonomy-surface", "--scenario", "su2_nonflat.scn"],
    ["transitions", "--scenario", "transitions_perturbed.scn"],
]


@pytest.mark.parametrize("argv", PASSING, ids=lambda a: "-".join(a[::2]))
def test_exit_zero_when_all_checks_pass(argv, capsys):
    assert cli.run(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == 1
    assert doc["report"]["verdict"] == "PASS"


@pytest.mark.parametrize("argv", FAILING, ids=lambda a: "-".join(a[::2]))
def test_exit_one_when_any_check_fails(argv, capsys):
    assert cli.run(argv) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["report"]["verdict"] == "FAIL"
    bad = [c for c in doc["report"]["checks"] if c["verdict"] == "FAIL"]
    assert bad


def test_exit_two_usage_and_config():
    assert cli.run(["no-such-command", "--scenario", "abelian.scn"]) == 2
    assert cli.run(["validate", "--scenario", "abelian.scn", "--bogus"]) == 2
    assert cli.run(["validate", "--scenario", "does_not_exist.scn"]) == 2
    # abelian.scn carries no path, so path holonomy cannot start
    assert cli.run(["holonomy-path", "--scenario", "abelian.scn"]) == 2


def test_classification_budget_refusal(capsys):
    # CONJ(S3) on the tetrahedron nerve: 6^10 candidate assignments
    assert cli.run(["classify", "--scenario", "s3_cocycle.scn"]) == 2
    err = capsys.readouterr().err
    assert "refusing to run" in err
    assert "60466176" in err


def test_help_exits_zero():
    assert cli.run(["--help"]) == 0


# ---------------------------------------------------------------- output


def test_reports_are_byte_identical_across_runs(capsys):
    argv = ["validate", "--scenario", "abelian.scn", "--seed", "7"]
    cli.run(argv)
    first = capsys.readouterr().out
    cli.run(argv)
    second = capsys.readouterr().out
    assert first == second
    assert first.encode() == second.encode()


def test_json_is_compact_and_sorted(capsys):
    cli.run(["validate", "--scenario", "abelian.scn"])
    out = capsys.readouterr().out
    assert out.endswith("\n")
    doc = json.loads(out)
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    assert out == canonical


def test_every_residual_travels_with_its_tolerance(capsys):
    cli.run(["transitions", "--scenario", "su2_charts.scn"])
    doc = json.loads(capsys.readouterr().out)
    for check in doc["report"]["checks"]:
        if check.get("residual") is not None:
            assert check.get("tolerance") is not None, check["name"]


def test_wall_time_stays_on_stderr(capsys):
    cli.run(["validate", "--scenario", "abelian.scn"])
    captured = capsys.readouterr()
    assert "[wall]" not in captured.out
    assert "[wall]" in captured.err


def test_text_format_renders_verdict_lines(capsys):
    cli.run(["validate", "--scenario", "abelian.scn", "--format", "text"])
    out = capsys.readouterr().out
    assert out.startswith("# validate on abelian")
    assert "verdict: PASS" in out


def test_out_flag_writes_the_report_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    cli.run(["validate", "--scenario", "abelian.scn", "--out", str(target)])
    assert capsys.readouterr().out == ""
    doc = json.loads(target.read_text())
    assert doc["command"] == "validate"


def test_converge_csv_table(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code = cli.run(["converge", "--scenario", "su2_charts.scn",
                    "--csv", str(target)])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    rows = target.read_text().strip().splitlines()
    assert rows[0] == "grid,error"
    assert len(rows) == 1 + len(doc["payload"]["grids"])
    for row, n, err in zip(rows[1:], doc["payload"]["grids"],
                           doc["payload"]["errors"]):
        assert row == f"{n},{err!r}"


def test_seed_flag_overrides_scenario_seed(capsys):
    cli.run(["validate", "--scenario", "abelian.scn", "--seed", "99"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 99
    cli.run(["validate", "--scenario", "abelian.scn"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 42


def test_grid_flag_overrides_scenario_grid(capsys):
    cli.run(["holonomy-surface", "--scenario", "su2_charts.scn",
             "--grid", "16"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["payload"]["grid"] == 16


def test_classify_census_payload(capsys):
    cli.run(["classify", "--scenario", "gerbe_census.scn"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["payload"]["cocycles"] == 16
    assert doc["payload"]["orbits"] == 2


def test_cocycle_failure_names_the_tetrahedron(capsys):
    cli.run(["cocycle", "--scenario", "corrupted_s3.scn"])
    doc = json.loads(capsys.readouterr().out)
    bad = [c for c in doc["report"]["checks"] if c["verdict"] == "FAIL"]
    assert any("triangle" in c["name"] or "tetrahedron" in c["name"]
               for c in bad)
    assert any(c.get("witness") for c in bad)
