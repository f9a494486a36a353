import json
import random
from importlib import resources

import pytest

from oracles import q
from tightstorage.cli import load_params
from tightstorage.errors import InvalidParams
from tightstorage.formulations import validate_params
from tightstorage.hull import (build_disjuncts, certify_hull, certify_random, one_period, random_params,
                               replay_appendix_a)
from tightstorage.polyhedra import Polyhedron, poly_equal


def test_disjuncts_example1(example1):
    d = build_disjuncts(example1, "bo")
    # charging: e >= 5, e + pC/2 <= 50 (stored as 2e + pC <= 100), 0 <= pC <= 10, pD = 0
    assert d.charging.contains({"e[0]": 5, "pC[1]": 10, "pD[1]": 0})
    assert not d.charging.contains({"e[0]": 50, "pC[1]": 1, "pD[1]": 0})
    assert not d.charging.contains({"e[0]": 10, "pC[1]": 1, "pD[1]": 1})
    # discharging: e - 2 pD >= 5
    assert d.discharging.contains({"e[0]": 25, "pC[1]": 0, "pD[1]": 10})
    assert not d.discharging.contains({"e[0]": 24, "pC[1]": 0, "pD[1]": 10})


def test_disjuncts_zero_charge_capacity(example1):
    d = build_disjuncts(example1.with_(P_C_max=q(0)), "bo")
    assert not d.charging.contains({"e[0]": 10, "pC[1]": q("1/10"), "pD[1]": 0})
    assert d.charging.contains({"e[0]": 50, "pC[1]": 0, "pD[1]": 0})


def test_certify_example1(example1):
    c = certify_hull(example1, "bo")
    assert c.equality and c.polyhedral_equal and c.no_simultaneity and c.certificates_verified
    assert all(pt["delta[1]"] in (0, 1) for pt in c.tight_lp_vertices.as_dicts())
    doc = json.loads(c.dumps())
    assert doc["equality"] is True and doc["family"] == "bo"
    assert "equality: true" in c.render()


def test_certify_violating_params_gives_witness():
    p = load_params("violating")[0]
    assert validate_params(p, "bo")
    c = certify_hull(p, "bo")
    assert not c.equality and c.witness is not None


@pytest.mark.parametrize("family", ["bo", "bor", "bir"])
def test_random_params_are_valid(family):
    rng = random.Random(3)
    for _ in range(30):
        assert validate_params(random_params(family, rng), family) == []


def test_certify_random_small_batches():
    for fam in ("bo", "bor", "bir"):
        assert all(c.equality for _, c in certify_random(fam, 3, seed=11))


def test_certify_random_is_reproducible():
    a = [p for p, _ in certify_random("bo", 5, seed=7, vertices=False)]
    b = [p for p, _ in certify_random("bo", 5, seed=7, vertices=False)]
    assert a == b


def test_printed_tir_facets_fail_with_installed_capacity():
    """The energy-limit facets as written use Ē₀δ in both rows; with installed capacity they are not the hull."""
    rng = random.Random(7)
    printed_fail = corrected_fail = 0
    checked = 0
    while checked < 6:
        p = random_params("bir", rng)
        if p.E0_installed == 0:
            continue
        checked += 1
        corrected_fail += not certify_hull(p, "bir", vertices=False).equality
        printed_fail += not certify_hull(p, "bir", vertices=False, facets="printed").equality
    assert corrected_fail == 0
    assert printed_fail == checked


def test_printed_tir_facets_hold_without_installed_capacity():
    p = load_params("tep_valid")[0]
    assert certify_hull(p, "bir", vertices=False, facets="printed").equality


def test_replay_example1(example1):
    t = replay_appendix_a(example1)
    assert t.ok
    tags = {s.tag: s.status for s in t.steps if s.tag}
    assert tags["eq:inchb1"] == "in CH" and tags["eq:inchb2"] == "in CH" and tags["eq:red1"] == "dominated"
    assert all(s.verified for s in t.steps if s.status == "dominated")
    assert poly_equal(t.final, Polyhedron(t.final.variables, one_period("to", example1).constraints))


def test_replay_matches_golden(example1):
    golden = resources.files("tightstorage") / "data" / "golden" / "replay_example1.txt"
    assert replay_appendix_a(example1).render() == golden.read_text()


def test_replay_degenerate_capacity(example1):
    t = replay_appendix_a(example1.with_(P_C_max=q(0), P_D_max=q(0)))
    assert t.final_equals_tight and t.certificates_verified


def test_replay_rejects_invalid():
    with pytest.raises(InvalidParams):
        replay_appendix_a(load_params("violating")[0])
