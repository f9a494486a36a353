"""Random instance generators and brute-force oracles shared by the tests."""
import itertools
import random

from tightstorage.formulations.model import BINARY, CONTINUOUS, ModelInstance, Variable
from tightstorage.numeric import LinearForm, to_rational
from tightstorage.polyhedra import LE, LinearConstraint, Polyhedron, enumerate_vertices
from tightstorage.polyhedra.lp import feasible_point
from tightstorage.solver import INFEASIBLE, OPTIMAL, solve_lp


def q(x):
    return to_rational(x)


def random_polytope(rng: random.Random, n: int, extra: int, box: int = 5) -> Polyhedron:
    """Box plus ``extra`` random cuts, all passing a common interior point."""
    names = [f"x{i}" for i in range(n)]
    rows = []
    for v in names:
        rows.append(LinearConstraint.make(LinearForm({v: 1}), LE, box, f"ub[{v}]"))
        rows.append(LinearConstraint.make(LinearForm({v: -1}), LE, box, f"lb[{v}]"))
    center = {v: q(rng.randint(-2, 2)) for v in names}
    for k in range(extra):
        coeffs = {v: rng.randint(-3, 3) for v in names}
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            continue
        form = LinearForm(coeffs)
        rhs = form.evaluate(center) + q(rng.randint(0, 6)) / rng.randint(1, 3)
        rows.append(LinearConstraint.make(form, LE, rhs, f"cut{k}"))
    return Polyhedron(names, rows)


def random_lp(rng: random.Random, n: int, m: int, feasible: bool = True) -> ModelInstance:
    """Bounded LP over ``n`` variables; rows share a feasible point unless ``feasible`` is False."""
    names = [f"x{i}" for i in range(n)]
    variables = [Variable(v, q(rng.randint(-4, 0)), q(rng.randint(1, 5))) for v in names]
    point = {v.id: v.lb for v in variables}
    rows = []
    for k in range(m):
        coeffs = {v: rng.randint(-4, 4) for v in names}
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            continue
        form = LinearForm(coeffs)
        slack = q(rng.randint(0, 8)) / rng.randint(1, 4)
        sense = rng.choice(["<=", "<=", ">="])
        base = form.evaluate(point)
        rhs = base + slack if sense == "<=" else base - slack
        rows.append(LinearConstraint.make(form, sense, rhs, f"r{k}"))
    if not feasible:
        v = names[0]
        rows.append(LinearConstraint.make(LinearForm({v: 1}), ">=", variables[0].ub + 1, "impossible"))
    obj = LinearForm({v: rng.randint(-5, 5) for v in names})
    return ModelInstance(tuple(variables), tuple(rows), obj, rng.choice(["min", "max"]), 1, "random")


def vertex_optimum(m: ModelInstance):
    """(status, objective) by enumerating every vertex of the feasible region."""
    poly = m.to_polyhedron()
    if feasible_point(poly) is None:
        return INFEASIBLE, None
    vals = [m.evaluate(pt) for pt in enumerate_vertices(poly).as_dicts()]
    return OPTIMAL, (min(vals) if m.sense == "min" else max(vals))


def random_mip(rng: random.Random, n_bin: int, n_cont: int, m: int) -> ModelInstance:
    names_b = [f"b{i}" for i in range(n_bin)]
    names_c = [f"y{i}" for i in range(n_cont)]
    variables = [Variable(v, q(0), q(1), BINARY) for v in names_b]
    variables += [Variable(v, q(0), q(rng.randint(1, 4)), CONTINUOUS) for v in names_c]
    rows = []
    allv = names_b + names_c
    for k in range(m):
        coeffs = {v: rng.randint(-3, 3) for v in allv}
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            continue
        rhs = q(rng.randint(-1, 2 * len(coeffs))) / 2
        rows.append(LinearConstraint.make(LinearForm(coeffs), LE, rhs, f"r{k}"))
    obj = LinearForm({v: rng.randint(-6, 6) for v in allv})
    return ModelInstance(tuple(variables), tuple(rows), obj, rng.choice(["min", "max"]), 1, "random")


def brute_force_mip(m: ModelInstance):
    """Enumerate every binary assignment; continuous parts solved exactly as LPs."""
    bins = m.binaries()
    best = None
    for bits in itertools.product((0, 1), repeat=len(bins)):
        fixed = dict(zip(bins, (q(b) for b in bits)))
        if len(bins) == len(m.variables):
            if not m.is_feasible(fixed):
                continue
            val = m.evaluate(fixed)
        else:
            r = solve_lp(m.fix(fixed))
            if r.status != OPTIMAL:
                continue
            val = r.objective
        if best is None or (val < best if m.sense == "min" else val > best):
            best = val
    return (OPTIMAL, best) if best is not None else (INFEASIBLE, None)


def example_point(e0, *periods, p):
    """Two-period point from (e0, pC, pD, delta) tuples; e_t follows from the balance."""
    pt = {"e[0]": q(e0)}
    e = q(e0)
    for t, (pc, pd, d) in enumerate(periods, 1):
        e = e + p.eta_C * p.delta_t * q(pc) - p.delta_t / p.eta_D * q(pd)
        pt.update({f"e[{t}]": e, f"pC[{t}]": q(pc), f"pD[{t}]": q(pd), f"delta[{t}]": q(d)})
    return pt
