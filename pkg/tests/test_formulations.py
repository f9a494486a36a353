import itertools

import pytest

from oracles import example_point, q
from tightstorage.cli import load_params
from tightstorage.errors import InvalidParams
from tightstorage.formulations import (BINARY, CONTINUOUS, FAMILIES, ModelInstance, ReserveProfile, StorageParams,
                                       build, build_bir, build_bo, build_bof, build_bor, build_tir, build_to,
                                       relax, validate_params)
from tightstorage.numeric import LinearForm
from tightstorage.polyhedra import enumerate_vertices, poly_equal
from tightstorage.solver import OPTIMAL, solve_lp


@pytest.fixture(scope="module")
def uc():
    return load_params("uc")[0]


@pytest.fixture(scope="module")
def tep():
    return load_params("tep_valid")[0]


def test_params_load_exact(uc):
    assert uc.E_min == 5 and uc.E_max == 13 and uc.eta_C == q("9/10")
    assert uc.P_C_max == q("80/9") and uc.P_D_max == q("36/5")


def test_params_unknown_key_rejected():
    with pytest.raises(ValueError):
        StorageParams.from_json({"E_min": "0", "bogus": "1"})


def test_validation_names_parameter(example1):
    bad = validate_params(example1.with_(P_C_max=q(100)), "bo")
    assert [v.name for v in bad] == ["P_C_max"]
    assert validate_params(example1, "bo") == []
    assert "E_max" in [v.name for v in validate_params(example1.with_(E_max=q(5)), "bo")]
    assert validate_params(example1.with_(eta_C=q(0)), "bo")[0].name == "eta_C"


def test_builder_raises_invalid_params(example1):
    with pytest.raises(InvalidParams) as err:
        build_bo(example1.with_(P_C_max=q(100)), 1)
    assert "P_C_max" in str(err.value)


def test_investment_bound_violation_reported():
    published = load_params("tep")[0]
    assert [v.name for v in validate_params(published, "bir")] == ["D_max"]


@pytest.mark.parametrize("family,per_period", [("bo", 5), ("to", 5), ("bor", 9), ("tor", 11), ("bof", 9)])
def test_row_count_affine_in_horizon(example1, family, per_period):
    counts = [len(build(family, example1, T).constraints) for T in (1, 2, 3)]
    assert counts == [per_period, 2 * per_period, 3 * per_period]


def test_investment_row_counts(tep):
    for fam in ("bir", "tir"):
        c = [len(build(fam, tep, T).constraints) for T in (1, 2, 3)]
        assert c[2] - c[1] == c[1] - c[0]


def test_uc_to_two_periods_has_ten_rows(uc):
    m = build_to(uc, 2)
    assert len(m.constraints) == 10
    assert len(m.binaries()) == 2


def test_labels_carry_equation_key_and_period(example1):
    m = build_to(example1, 2)
    labels = {r.label for r in m.constraints}
    assert "eq:chso-a[t=2]" in labels and "eq:chso-b[t=1]" in labels and "eq:bso-a[t=1]" in labels


def test_relax_is_idempotent_and_keeps_bounds(example1):
    m = relax(build_bo(example1, 2))
    assert not m.binaries()
    assert relax(m) == m
    d = m.var("delta[1]")
    assert d.kind == CONTINUOUS and (d.lb, d.ub) == (0, 1)


def test_example1_point_cut_by_four(example1):
    pt = example_point(50, (8, 2, "4/5"), p=example1)
    bo = relax(build_bo(example1, 1, initial="variable"))
    to = relax(build_to(example1, 1, initial="variable"))
    assert bo.is_feasible(pt)
    viol = dict(to.violations(pt))
    assert viol == {"eq:chso-a[t=1]": 4}
    assert not build_bo(example1, 1, initial="variable").is_feasible(pt)


@pytest.mark.parametrize("e0,periods", [
    (50, ((8, 2, "4/5"), (0, 0, 0))),
    (50, ((8, 2, "4/5"), (8, 2, "4/5"))),
    (45, ((10, 0, 1), (8, 2, "4/5"))),
])
def test_example2_points(example1, e0, periods):
    pt = example_point(e0, *periods, p=example1)
    assert relax(build_bo(example1, 2, initial="variable")).is_feasible(pt)
    assert not relax(build_to(example1, 2, initial="variable")).is_feasible(pt)


def test_integer_feasible_sets_agree(example1):
    """Basic and tight MIPs accept the same points for every binary assignment (T=2)."""
    for fam_b, fam_t in (("bo", "to"), ("bor", "tor")):
        b = build(fam_b, example1.with_(R_up=q(5), R_down=q(5)), 2, initial="variable")
        t = build(fam_t, example1.with_(R_up=q(5), R_down=q(5)), 2, initial="variable")
        for bits in itertools.product((0, 1), repeat=2):
            fix = {f"delta[{i}]": q(v) for i, v in enumerate(bits, 1)}
            pb = relax(b.fix(fix)).to_polyhedron()
            pt = relax(t.fix(fix)).to_polyhedron()
            assert poly_equal(pb, pt), (fam_b, bits)


def test_tight_lp_inside_basic_lp(example1):
    b = relax(build_bo(example1, 1, initial="variable")).to_polyhedron()
    t = relax(build_to(example1, 1, initial="variable")).to_polyhedron()
    for v in enumerate_vertices(t).as_dicts():
        assert b.contains(v)


def test_reserve_minima_rows(uc):
    p = load_params("uc_reserves")[0]
    m = build_bor(p, 2, ReserveProfile.constant(2, 1, 1))
    labels = [r.label for r in m.constraints]
    assert "eq:reserve-up-min[t=1]" in labels and "eq:reserve-down-min[t=2]" in labels


def test_bir_investment_cap_blocks_excess(tep):
    m = relax(build_bir(tep, 1, initial="variable"))
    over = m.with_bounds({"e_inv": (tep.E_invest_max + 1, tep.E_invest_max + 1)})
    assert solve_lp(over).status != OPTIMAL


def test_tir_without_capacity_forbids_operation(tep):
    p = tep.with_(E_invest_max=q(0), C_max=q(0), D_max=q(0), E0_installed=q(0))
    m = relax(build_tir(p, 1, initial="variable"))
    res = solve_lp(m.with_objective(LinearForm({"pC[1]": 1, "pD[1]": 1}), "max"))
    assert res.status == OPTIMAL and res.objective == 0


def test_tir_facet_variants_differ(tep):
    p = tep.with_(E0_installed=q(10), PC0_installed=q(5), PD0_installed=q(5))
    a = build_tir(p, 1)
    b = build_tir(p, 1, facets="printed")
    assert {r.label for r in a.constraints} == {r.label for r in b.constraints}
    assert set(a.constraints) != set(b.constraints)
    with pytest.raises(ValueError):
        build_tir(p, 1, facets="other")


def test_bof_reserve_rows(example1):
    m = build_bof(example1.with_(R_up=q(20), R_down=q(20)), 1)
    assert any(r.label.startswith("eq:bofr-b") for r in m.constraints)


def test_model_json_roundtrip(uc, tmp_path):
    m = build_to(uc, 2)
    path = tmp_path / "m.json"
    m.dump(path)
    back = ModelInstance.load(path)
    assert back.variables == m.variables and set(back.constraints) == set(m.constraints)
    assert "Binary" in m.to_lp_text()


def test_every_family_builds(example1, tep):
    for fam in FAMILIES:
        p = tep if fam in ("bir", "tir") else example1
        m = build(fam, p, 2)
        assert all(v.kind in (BINARY, CONTINUOUS) for v in m.variables)
        assert all(r.label.startswith("eq:") for r in m.constraints)
