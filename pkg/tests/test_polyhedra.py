import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import q, random_polytope
from tightstorage.errors import InvalidDisjunct, TooLarge, Unbounded
from tightstorage.numeric import LinearForm
from tightstorage.polyhedra import (EQ, GE, LE, LinearConstraint, Polyhedron, balas_lift, enumerate_vertices,
                                    fm_eliminate, hull_of_points, poly_equal, project, redundancy_report,
                                    remove_redundant, verify_certificate)
from tightstorage.polyhedra.constraint import normalize


def row(coeffs, sense, rhs, label=""):
    return LinearConstraint.make(LinearForm(coeffs), sense, rhs, label)


def box(names, lo=0, hi=1):
    rows = []
    for v in names:
        rows += [row({v: 1}, LE, hi, f"ub[{v}]"), row({v: 1}, GE, lo, f"lb[{v}]")]
    return rows


def test_normalization_scales_to_coprime_integers_and_tracks_units():
    r, scale = normalize(LinearForm({"x": q("1/2"), "y": q("3/4")}), GE, q("1/4"), "r")
    assert r.sense == LE
    assert dict(r.coeffs) == {"x": -2, "y": -3} and r.rhs == -1
    assert scale == -4
    # a violation of 1 in the written row is 4 in the stored row
    pt = {"x": 0, "y": 0}
    assert r.violation(pt) == 1 and r.source_violation(pt) == q("1/4")


def test_equality_rows_get_positive_leading_coefficient():
    r = row({"a": -2, "b": 4}, EQ, -6)
    assert dict(r.coeffs) == {"a": 1, "b": -2} and r.rhs == 3


def test_undeclared_variables_rejected():
    with pytest.raises(ValueError):
        Polyhedron(["x"], [row({"y": 1}, LE, 1)])


def test_unit_square_vertices():
    p = Polyhedron(["x", "y"], box(["x", "y"]))
    vs = enumerate_vertices(p)
    assert sorted(vs.points) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_vertices_of_empty_and_unbounded():
    empty = Polyhedron(["x"], [row({"x": 1}, LE, -1), row({"x": 1}, GE, 0)])
    assert len(enumerate_vertices(empty)) == 0
    with pytest.raises(Unbounded):
        enumerate_vertices(Polyhedron(["x"], [row({"x": 1}, GE, 0)]))


def test_vertex_guard():
    names = [f"x{i}" for i in range(4)]
    with pytest.raises(TooLarge):
        enumerate_vertices(Polyhedron(names, box(names)), max_dim=3)


def test_fm_triangle_projection():
    p = Polyhedron(["x", "y"], [row({"x": 1, "y": 1}, LE, 2), row({"x": 1}, GE, 0), row({"y": 1}, GE, 0)])
    proj = fm_eliminate(p, "y")
    assert poly_equal(proj, Polyhedron(["x"], [row({"x": 1}, LE, 2), row({"x": 1}, GE, 0)]))


def test_fm_uses_equalities_as_substitutions():
    p = Polyhedron(["x", "y"], [row({"x": 1, "y": -1}, EQ, 0)] + box(["y"], 0, 3))
    proj = fm_eliminate(p, "y")
    assert poly_equal(proj, Polyhedron(["x"], box(["x"], 0, 3)))


def test_fm_variable_without_bounds_drops_rows():
    p = Polyhedron(["x", "y"], [row({"x": 1, "y": 1}, LE, 2)] + box(["x"], 0, 1))
    proj = fm_eliminate(p, "y")
    assert poly_equal(proj, Polyhedron(["x"], box(["x"], 0, 1)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_fm_matches_vertex_projection(seed):
    rng = random.Random(seed)
    p = random_polytope(rng, 3, rng.randint(0, 3))
    var = p.variables[0]
    keep = [v for v in p.variables if v != var]
    pts = [tuple(d[v] for v in keep) for d in enumerate_vertices(p).as_dicts()]
    assert poly_equal(fm_eliminate(p, var), hull_of_points(pts, keep))


def test_project_orders_variables_and_traces():
    p = Polyhedron(["x", "y", "z"], box(["x", "y", "z"]) + [row({"x": 1, "y": 1, "z": 1}, LE, 2)])
    trace = []
    out = project(p, ["z", "x"], trace)
    assert out.variables == ("z", "x")
    assert [v for v, _ in trace] == ["y"]


def test_redundancy_certificates_verify():
    p = Polyhedron(["x", "y"], box(["x", "y"]) + [row({"x": 1, "y": 1}, LE, 3), row({"x": 1}, LE, 5),
                                                  row({"x": 2, "y": 2}, LE, 5)])
    rep = redundancy_report(p)
    assert len(rep.kept) == 4
    assert rep.removed and rep.verify()
    assert all(verify_certificate(c, rep.kept) for c in rep.removed)
    assert poly_equal(remove_redundant(p), p)


def test_tampered_certificate_fails():
    p = Polyhedron(["x"], box(["x"]) + [row({"x": 1}, LE, 2)])
    rep = redundancy_report(p)
    cert = rep.removed[0]
    bad_kept = Polyhedron(["x"], [row({"x": 1}, GE, 0)])
    assert not verify_certificate(cert, bad_kept)


def test_poly_equal_reports_witness():
    a = Polyhedron(["x"], box(["x"], 0, 2))
    b = Polyhedron(["x"], box(["x"], 0, 1))
    cmp = poly_equal(a, b)
    assert not cmp and cmp.inside == "a" and cmp.amount == 1
    assert cmp.witness["x"] == 2


def test_balas_hull_of_two_segments():
    # {x in [0,1]} with delta=1 and {x in [2,3]} with delta=0: hull is 2-2delta <= x <= 3-2delta
    c = Polyhedron(["x"], box(["x"], 0, 1))
    d = Polyhedron(["x"], box(["x"], 2, 3))
    lifted = balas_lift(c, d, ["x"], "delta")
    hull = project(lifted, ["x", "delta"])
    expect = Polyhedron(["x", "delta"], [row({"x": 1, "delta": 2}, GE, 2), row({"x": 1, "delta": 2}, LE, 3),
                                         row({"delta": 1}, GE, 0), row({"delta": 1}, LE, 1)])
    assert poly_equal(hull, expect)


def test_balas_rejects_mismatched_disjuncts():
    with pytest.raises(InvalidDisjunct):
        balas_lift(Polyhedron(["x"], box(["x"])), Polyhedron(["y"], box(["y"])), ["x"], "delta")


def test_hull_of_points_lower_dimensional():
    h = hull_of_points([(0, 0), (1, 1), (2, 2)], ["x", "y"])
    assert h.contains({"x": 1, "y": 1}) and not h.contains({"x": 1, "y": 0})
    assert not h.contains({"x": 3, "y": 3})
