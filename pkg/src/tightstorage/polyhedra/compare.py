"""Exact equality test for bounded polyhedra."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import Unbounded
from .constraint import EQ, LinearConstraint, Polyhedron
from .lp import INFEASIBLE, UNBOUNDED, feasible_point, is_bounded, maximize


@dataclass
class Comparison:
    """Outcome of ``poly_equal``.

    On inequality, ``witness`` lies in polyhedron ``inside`` ("a" or "b") and
    violates ``violated`` (a row of the other polyhedron) by ``amount``.
    """

    equal: bool
    witness: dict | None = None
    inside: str | None = None
    violated: LinearConstraint | None = None
    amount: object = None

    def __bool__(self) -> bool:
        return self.equal


def _halves(row: LinearConstraint):
    yield row
    if row.sense == EQ:
        yield row.negated_le()


def _contained(inner: Polyhedron, outer: Polyhedron):
    """None when inner ⊆ outer, else (point, row, amount)."""
    for row in outer.constraints:
        for half in _halves(row):
            target = dict(half.coeffs)
            res = maximize(inner, target)
            if res.status == UNBOUNDED:
                raise Unbounded("unbounded polyhedron in comparison")
            if res.status == INFEASIBLE:
                return None
            if res.value > half.rhs:
                return res.point, row, res.value - half.rhs
    return None


def poly_equal(a: Polyhedron, b: Polyhedron, check_bounded: bool = True) -> Comparison:
    if set(a.variables) != set(b.variables):
        raise ValueError("polyhedra are over different variables")
    b = Polyhedron(a.variables, b.constraints)
    if check_bounded:
        for name, p in (("a", a), ("b", b)):
            if not is_bounded(p):
                raise Unbounded(f"polyhedron {name} is unbounded")
    pa = feasible_point(a)
    pb = feasible_point(b)
    if pa is None and pb is None:
        return Comparison(True)
    if pa is None:
        return Comparison(False, pb, "b")
    if pb is None:
        return Comparison(False, pa, "a")
    hit = _contained(b, a)
    if hit is not None:
        return Comparison(False, hit[0], "b", hit[1], hit[2])
    hit = _contained(a, b)
    if hit is not None:
        return Comparison(False, hit[0], "a", hit[1], hit[2])
    return Comparison(True)
