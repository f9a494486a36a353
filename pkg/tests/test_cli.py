import json

import pytest

from tightstorage.cli import EXIT_FALSE, EXIT_INPUT, EXIT_LIMIT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_to_uc_two_periods(capsys):
    code, out, _ = run(capsys, "build", "to", "--params", "uc", "-T", "2")
    doc = json.loads(out)
    assert code == EXIT_OK and len(doc["constraints"]) == 10 and doc["horizon"] == 2


def test_build_invalid_params_names_parameter(capsys):
    code, _, err = run(capsys, "build", "bo", "--params", "violating")
    assert code == EXIT_INPUT and "P_C_max" in err


def test_build_tir_relaxed_is_continuous(capsys):
    code, out, _ = run(capsys, "build", "tir", "--params", "tep_valid", "-T", "2", "--relax")
    assert code == EXIT_OK
    assert {v["kind"] for v in json.loads(out)["variables"]} == {"continuous"}


@pytest.mark.parametrize("fmt", ["csv", "md", "text"])
def test_build_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "build", "to", "--params", "example1", "--format", fmt)
    assert code == EXIT_OK and out


def test_missing_params_file(capsys):
    code, _, err = run(capsys, "build", "bo", "--params", "/nonexistent.json")
    assert code == EXIT_INPUT and "not found" in err


def test_solve_and_limits(capsys, tmp_path):
    model = tmp_path / "uc_to.json"
    assert main(["build", "to", "--case", "uc", "--out", str(model)]) == EXIT_OK
    code, out, _ = run(capsys, "solve", str(model))
    assert code == EXIT_OK and "objective: 159.0" in out
    code, _, err = run(capsys, "solve", str(model), "--node-limit", "1")
    assert code == EXIT_LIMIT and "node limit" in err
    code, out, _ = run(capsys, "solve", str(model), "--float", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["objective"] == "159/1"


def test_solve_infeasible(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"variables": [{"id": "x", "lb": "0", "ub": "1", "kind": "continuous"}],
                                "constraints": [{"coeffs": {"x": "1"}, "sense": ">=", "rhs": "2"}]}))
    code, out, _ = run(capsys, "solve", str(path))
    assert code == EXIT_FALSE and "Infeasible" in out


def test_solve_malformed_model(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    assert run(capsys, "solve", str(path))[0] == EXIT_INPUT


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "bo", "--params", "example1")
    assert code == EXIT_OK and "equality: true" in out
    code, out, _ = run(capsys, "certify", "bo", "--params", "violating")
    assert code == EXIT_FALSE and "witness" in out
    code, out, _ = run(capsys, "certify", "bo", "--random", "3", "--seed", "5", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["seed"] == 5 and doc["passed"] == 3
    assert run(capsys, "certify", "bo")[0] == EXIT_INPUT


def test_certify_printed_facets_flag(capsys):
    code, out, _ = run(capsys, "certify", "tir", "--params", "tep_valid", "--facets", "printed", "--format", "md")
    assert code == EXIT_OK and "seed: none" in out


def test_replay(capsys):
    code, out, _ = run(capsys, "replay", "example1")
    assert code == EXIT_OK and "in CH" in out and "dominated by" in out
    code, out, _ = run(capsys, "replay", "example1", "--format", "json")
    assert json.loads(out)["final_equals_tight"] is True
    assert run(capsys, "replay", "violating")[0] == EXIT_INPUT


def test_case_writes_report_and_figure(capsys, tmp_path):
    out = tmp_path / "uc.md"
    code, _, err = run(capsys, "case", "uc", "--out", str(out))
    assert code == EXIT_OK and out.exists() and (tmp_path / "uc-dispatch.png").exists()
    assert "PASS bound ordering" in out.read_text()


def test_case_paper_faithful_template_is_bad_input(capsys):
    code, _, err = run(capsys, "case", "tep", "--data", "paper-faithful")
    assert code == EXIT_INPUT and "incomplete template" in err


def test_case_data_override(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("TIGHT_STORAGE_DATA", str(tmp_path))
    assert run(capsys, "case", "uc")[0] == EXIT_INPUT


def test_reserve_flex(capsys, tmp_path):
    code, out, _ = run(capsys, "reserve-flex", "reserve_flex_efficiency", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["down"]["bof"] == "16/1" and doc["down"]["realizable"] == "8/1"
    code, out, _ = run(capsys, "reserve-flex", "reserve_flex_power", "--p-discharge", "0", "--format", "text")
    assert code == EXIT_OK and "BOR   10.0" in out
    target = tmp_path / "flex.md"
    assert main(["reserve-flex", "reserve_flex_power", "--out", str(target)]) == EXIT_OK
    assert target.with_suffix(".png").exists()


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as err:
        main(["build", "xyz"])
    assert err.value.code == 2
