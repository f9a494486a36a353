"""Exact LPs over polyhedra with free (sign-unrestricted) variables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..numeric import ONE, ZERO, Rational, to_rational
from ..solver.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, solve_standard
from .constraint import EQ, LE, Polyhedron


@dataclass
class PolyLP:
    """Result of ``max objective·x`` over a polyhedron.

    ``multipliers`` maps row index to its dual value: nonnegative for
    inequality rows, free for equalities.  On Optimal they satisfy
    ``sum u_i a_i == objective`` and ``sum u_i b_i == value``; on Infeasible
    they satisfy ``sum u_i a_i == 0`` and ``sum u_i b_i < 0``.
    """

    status: str
    value: Rational | None = None
    point: dict | None = None
    multipliers: dict | None = None
    direction: dict | None = None


def _standard(poly: Polyhedron, skip: int | None = None):
    idx = {v: i for i, v in enumerate(poly.variables)}
    n = len(poly.variables)
    rows = [(k, r) for k, r in enumerate(poly.constraints) if k != skip]
    n_le = sum(1 for _, r in rows if r.sense == LE)
    width = 2 * n + n_le
    A, b = [], []
    s = 0
    for _, r in rows:
        row = [ZERO] * width
        for v, c in r.coeffs:
            j = idx[v]
            row[j] = c
            row[n + j] = -c
        if r.sense == LE:
            row[2 * n + s] = ONE
            s += 1
        A.append(row)
        b.append(r.rhs)
    return A, b, rows, width


def maximize(poly: Polyhedron, objective: Mapping[str, object], skip: int | None = None,
             rule: str = "dantzig") -> PolyLP:
    """Maximize a linear objective over ``poly`` (optionally ignoring one row)."""
    A, b, rows, width = _standard(poly, skip)
    n = len(poly.variables)
    c = [ZERO] * width
    for v, coef in objective.items():
        q = to_rational(coef)
        if q:
            j = poly.variables.index(v)
            c[j] = -q
            c[n + j] = q
    res = solve_standard(A, b, c, rule=rule)
    if res.status == INFEASIBLE:
        mult = {k: -y for (k, _), y in zip(rows, res.y) if y}
        return PolyLP(INFEASIBLE, multipliers=mult)
    if res.status == UNBOUNDED:
        direction = {v: res.ray[j] - res.ray[n + j] for j, v in enumerate(poly.variables)}
        point = {v: res.x[j] - res.x[n + j] for j, v in enumerate(poly.variables)}
        return PolyLP(UNBOUNDED, point=point, direction=direction)
    point = {v: res.x[j] - res.x[n + j] for j, v in enumerate(poly.variables)}
    mult = {k: -y for (k, _), y in zip(rows, res.y) if y}
    return PolyLP(OPTIMAL, value=-res.objective, point=point, multipliers=mult)


def feasible_point(poly: Polyhedron) -> dict | None:
    res = maximize(poly, {})
    return res.point if res.status == OPTIMAL else None


def is_bounded(poly: Polyhedron) -> bool:
    """True when every variable has finite max and min (or the set is empty)."""
    for v in poly.variables:
        for s in (ONE, -ONE):
            res = maximize(poly, {v: s})
            if res.status == INFEASIBLE:
                return True
            if res.status == UNBOUNDED:
                return False
    return True


def check_multipliers(poly: Polyhedron, multipliers: Mapping[int, Rational], target: Mapping[str, object],
                      bound) -> bool:
    """Verify ``sum u_i a_i == target`` and ``sum u_i b_i <= bound`` exactly.

    ``bound=None`` checks an emptiness certificate instead
    (``sum u_i a_i == 0`` and ``sum u_i b_i < 0``).
    """
    acc: dict[str, Rational] = {}
    rhs = ZERO
    for k, u in multipliers.items():
        if not 0 <= k < len(poly.constraints):
            return False
        row = poly.constraints[k]
        if row.sense == LE and u < 0:
            return False
        for v, c in row.coeffs:
            acc[v] = acc.get(v, ZERO) + u * c
        rhs += u * row.rhs
    if bound is None:
        return all(not x for x in acc.values()) and rhs < 0
    want = {v: to_rational(c) for v, c in target.items() if to_rational(c)}
    got = {v: c for v, c in acc.items() if c}
    return got == want and rhs <= to_rational(bound)


__all__ = ["PolyLP", "maximize", "feasible_point", "is_bounded", "check_multipliers", "OPTIMAL", "INFEASIBLE",
           "UNBOUNDED", "EQ", "LE"]
