import json
import shutil

import pytest

from oracles import q
from tightstorage.cases import (DATA_ENV, Schedule, Scenario, assemble, data_dir, load_case,
                                realizable_reserves, reserve_flexibility_report, run_case)
from tightstorage.cases.report import FORMATS, render, render_flexibility, write_figures, write_flexibility_figure
from tightstorage.cases.runners import FAIL, PASS, SKIP, compare_expected
from tightstorage.cli import load_params
from tightstorage.errors import BadScenario, NoSolution
from tightstorage.solver import solve


def scenario_doc(case="uc"):
    return json.loads((data_dir() / "scenarios" / case / "approximated.json").read_text())


def test_bundled_scenarios_load():
    for case in ("uc", "uc-reserves", "tep", "multiperiod"):
        s = load_case(case)
        s.check()
        assert s.provenance == "approximated"
    assert load_case("multiperiod").horizon == 1460


@pytest.mark.parametrize("case", ["uc", "uc-reserves", "tep", "multiperiod"])
def test_paper_faithful_templates_refuse_to_run(case):
    s = load_case(case, "paper-faithful")
    assert s.provenance == "paper-complete" and not s.complete
    with pytest.raises(BadScenario, match="incomplete template"):
        s.check()


@pytest.mark.parametrize("mutate,msg", [
    (lambda d: d["demand"].update(b9=["1", "1"]), "unknown bus"),
    (lambda d: d.update(reserve_req=["1"]), "reserve_req"),
    (lambda d: d.update(objective="profit"), "objective"),
    (lambda d: d["generators"][0].update(bus="b7"), "unknown bus"),
])
def test_scenario_checks(mutate, msg):
    doc = scenario_doc()
    mutate(doc)
    with pytest.raises(BadScenario, match=msg):
        Scenario.from_json(doc).check()


def test_malformed_scenario():
    with pytest.raises(BadScenario):
        Scenario.from_json({"demand": {}})
    with pytest.raises(BadScenario):
        Scenario.from_json({**scenario_doc(), "generators": [{"id": "g", "p_min": "5", "p_max": "1", "bus": "b1",
                                                              "cost_linear": "1"}]})


def test_assemble_relaxes_only_storage():
    s = load_case("tep")
    m = assemble(s, "bir", tight=False, relaxed=True)
    assert m.binaries() == ["x_line"]
    labels = {r.label for r in m.constraints}
    assert "eq:power-balance[b2,t=2]" in labels and "eq:line-cap[t=1]" in labels


def test_multiperiod_repeat_and_reserve_fraction():
    s = load_case("tep")
    assert s.reserve_req == (q("5/2"), q(10))
    m = load_case("multiperiod")
    assert m.demand["b1"][:4] == m.demand["b1"][4:8]


def test_uc_report(case_reports):
    rep = case_reports["uc"]
    assert rep.ok
    names = {c.name: c.status for c in rep.checks}
    assert names["bound ordering"] == PASS and names["MIP objectives equal"] == PASS
    assert names["rendered costs vs published tables"] == SKIP
    assert rep.run("BO-LP").simultaneity[0] >= 1 and rep.run("TO-LP").simultaneity == (0, 0)


def test_uc_reserves_minimum_reserves_active(case_reports):
    rep = case_reports["uc-reserves"]
    assert rep.ok
    a = rep.run("BOR-MIP").result.assignment
    for t in (1, 2):
        assert a[f"rCup[{t}]"] + a[f"rDup[{t}]"] >= 1


def test_tep_report(case_reports):
    rep = case_reports["tep"]
    assert rep.ok
    assert rep.run("TIR-LP").objective == rep.run("TIR-MIP").objective
    assert rep.run("BIR-LP").objective < rep.run("TIR-LP").objective


@pytest.mark.parametrize("fmt", FORMATS)
def test_report_formats(case_reports, fmt):
    text = render(case_reports["uc"], fmt)
    if fmt == "json":
        doc = json.loads(text)
        assert doc["seed"] is None and doc["data_provenance"] == "approximated"
    else:
        assert "seed: none" in text and "approximated" in text


def test_report_is_deterministic():
    a, b = run_case("tep"), run_case("tep")
    assert render(a, "csv") == render(b, "csv")


def test_csv_has_exact_and_rendered(case_reports):
    lines = render(case_reports["uc"], "csv").splitlines()
    assert lines[1] == "model,variable,period,exact,rendered"
    assert any(line.startswith("BO-MIP,Total cost ($),,") for line in lines)


def test_figures_written(case_reports, tmp_path):
    paths = write_figures(case_reports["tep"], tmp_path)
    assert paths and all(p.exists() and p.stat().st_size > 0 for p in paths)


def test_compare_expected(case_reports):
    rep = case_reports["uc"]
    got = compare_expected(rep, {"BO-MIP": "159.0", "TO-LP": "1.0", "XX-MIP": "1"})
    assert [c.status for c in got] == [PASS, FAIL, FAIL]


def test_populated_template_via_data_override(tmp_path, monkeypatch):
    root = tmp_path / "data"
    shutil.copytree(data_dir(), root)
    doc = scenario_doc()
    doc.update(provenance="paper-complete", expected={"BO-MIP": "159.0", "TO-MIP": "159.0"})
    (root / "scenarios" / "uc" / "paper-faithful.json").write_text(json.dumps(doc))
    monkeypatch.setenv(DATA_ENV, str(root))
    rep = run_case("uc", "paper-faithful")
    checks = {c.name: c.status for c in rep.checks}
    assert checks["BO-MIP cost"] == PASS and checks["TO-MIP cost"] == PASS
    assert "rendered costs vs published tables" not in checks


def test_reserve_flexibility_power_case():
    p = load_params("reserve_flex_power")[0]
    rep = reserve_flexibility_report(p, Schedule(50, 0, 8))
    assert (rep.bor_down, rep.bof_down, rep.realizable_down) == (8, 18, 18)
    assert rep.bor_up == 2 and rep.bor_shortfall == 10 and not rep.bof_overpromises


def test_reserve_flexibility_efficiency_case():
    p = load_params("reserve_flex_efficiency")[0]
    rep = reserve_flexibility_report(p, Schedule(10, 0, 8))
    assert rep.bof_down == 16 and rep.realizable_down == 8 and rep.bof_overpromises


def test_reserve_flexibility_idle_and_outputs(tmp_path):
    p = load_params("reserve_flex_power")[0]
    rep = reserve_flexibility_report(p, Schedule(50))
    assert rep.bor_down == rep.bof_down == rep.realizable_down == 10
    for fmt in FORMATS:
        assert render_flexibility(rep, fmt)
    assert write_flexibility_figure(rep, tmp_path / "f.png").exists()


def test_realizable_reserves_respect_energy():
    p = load_params("reserve_flex_efficiency")[0]
    assert realizable_reserves(p, Schedule(0)) == (10, 0)


def test_simultaneous_schedule_rejected():
    p = load_params("reserve_flex_power")[0]
    with pytest.raises(NoSolution):
        reserve_flexibility_report(p, Schedule(50, 1, 1))


def test_assembled_mip_solves_exactly():
    r = solve(assemble(load_case("uc"), "bo", tight=True))
    assert r.optimal and r.objective == 159
