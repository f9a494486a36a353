"""Balas' extended formulation for the hull of two bounded polytopes."""
from __future__ import annotations

from typing import Sequence

from ..errors import InvalidDisjunct
from ..numeric import LinearForm
from .constraint import EQ, LE, LinearConstraint, Polyhedron
from .lp import feasible_point, is_bounded


def copy_name(var: str, k: int) -> str:
    return f"{var}^{k}"


def _check(p: Polyhedron, name: str, shared: Sequence[str]) -> None:
    if set(p.variables) != set(shared):
        raise InvalidDisjunct(f"{name} disjunct is not over the shared variables")
    if feasible_point(p) is None:
        raise InvalidDisjunct(f"{name} disjunct is empty")
    if not is_bounded(p):
        raise InvalidDisjunct(f"{name} disjunct is unbounded")


def _scaled_rows(p: Polyhedron, k: int, weight: str) -> list[LinearConstraint]:
    rows = []
    for r in p.constraints:
        coeffs = {copy_name(v, k): c for v, c in r.coeffs}
        coeffs[weight] = coeffs.get(weight, 0) - r.rhs
        rows.append(LinearConstraint.make(LinearForm(coeffs), r.sense, 0, f"{r.label}^{k}"))
    return rows


def balas_lift(charging: Polyhedron, discharging: Polyhedron, shared_vars: Sequence[str], delta_id: str) -> Polyhedron:
    """Lifted hull of ``charging × {δ=1} ∪ discharging × {δ=0}``.

    Copies ``v^1``/``v^2`` of each shared variable carry the two disjuncts;
    ``delta_id`` plays δ¹ and ``delta_id^2`` plays δ².  Right-hand sides are
    multiplied by the matching weight and the copies are linked by
    ``v = v^1 + v^2`` and ``δ¹ + δ² = 1``.
    """
    shared = list(shared_vars)
    if delta_id in shared:
        raise InvalidDisjunct("delta must not be a shared variable")
    _check(charging, "charging", shared)
    _check(discharging, "discharging", shared)
    d2 = copy_name(delta_id, 2)
    rows = _scaled_rows(charging, 1, delta_id) + _scaled_rows(discharging, 2, d2)
    for v in shared:
        rows.append(LinearConstraint.make(
            LinearForm({v: 1, copy_name(v, 1): -1, copy_name(v, 2): -1}), EQ, 0, f"link[{v}]"))
    rows.append(LinearConstraint.make(LinearForm({delta_id: 1, d2: 1}), EQ, 1, "link[delta]"))
    rows.append(LinearConstraint.make(LinearForm({delta_id: -1}), LE, 0, "weight^1>=0"))
    rows.append(LinearConstraint.make(LinearForm({d2: -1}), LE, 0, "weight^2>=0"))
    variables = shared + [delta_id] + [copy_name(v, 1) for v in shared] + [copy_name(v, 2) for v in shared] + [d2]
    return Polyhedron(variables, rows)
