"""Exact redundancy removal with machine-checkable certificates."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..numeric import ONE, Rational, format_rational
from .constraint import EQ, LE, LinearConstraint, Polyhedron
from .lp import INFEASIBLE, OPTIMAL, check_multipliers, maximize

TRIVIAL = "trivial"
DOMINATED = "dominated"
FARKAS = "farkas"
EMPTY = "empty"


@dataclass(frozen=True)
class Certificate:
    """Why ``row`` may be dropped from the kept system.

    * ``trivial``: the row has no variables and holds for every point.
    * ``dominated``: ``row.coeffs == factor * dominating.coeffs`` and
      ``row.rhs >= factor * dominating.rhs``.
    * ``farkas``: nonnegative multipliers (free on equalities) on kept rows
      sum to ``row``'s coefficients with combined rhs at most ``row.rhs``.
    * ``empty``: multipliers prove the kept system is infeasible.

    Multiplier keys are indices into the kept polyhedron's constraints.
    """

    row: LinearConstraint
    kind: str
    dominating: int | None = None
    factor: Rational | None = None
    multipliers: tuple = ()

    def to_json(self, kept: Polyhedron | None = None) -> dict:
        doc = {"row": self.row.to_json(), "kind": self.kind}
        if self.dominating is not None:
            doc["dominating"] = self.dominating
            doc["factor"] = format_rational(self.factor)
            if kept is not None:
                doc["dominating_label"] = kept.constraints[self.dominating].label
        if self.multipliers:
            doc["multipliers"] = [
                {"row": k, "value": format_rational(u), **({"label": kept.constraints[k].label} if kept else {})}
                for k, u in self.multipliers
            ]
        return doc

    def describe(self, kept: Polyhedron) -> str:
        if self.kind == TRIVIAL:
            return "trivially satisfied"
        if self.kind == DOMINATED:
            return f"dominated by ({kept.constraints[self.dominating].label})"
        if self.kind == EMPTY:
            return "remaining system is empty"
        parts = ", ".join(f"{format_rational(u)}*({kept.constraints[k].label})" for k, u in self.multipliers)
        return f"implied by {parts}"


def verify_certificate(cert: Certificate, kept: Polyhedron) -> bool:
    row = cert.row
    if cert.kind == TRIVIAL:
        return row.trivially_true()
    if cert.kind == DOMINATED:
        if not 0 <= cert.dominating < len(kept.constraints):
            return False
        dom = kept.constraints[cert.dominating]
        f = cert.factor
        if dom.sense == LE and f < 0:
            return False
        if {v: c for v, c in row.coeffs} != {v: f * c for v, c in dom.coeffs}:
            return False
        if row.sense == EQ:
            return dom.sense == EQ and row.rhs == f * dom.rhs
        return row.rhs >= f * dom.rhs
    mult = dict(cert.multipliers)
    if cert.kind == EMPTY:
        return check_multipliers(kept, mult, {}, None)
    if row.sense == EQ:
        return False
    return check_multipliers(kept, mult, dict(row.coeffs), row.rhs)


@dataclass
class RedundancyResult:
    kept: Polyhedron
    removed: list = field(default_factory=list)

    def verify(self) -> bool:
        return all(verify_certificate(c, self.kept) for c in self.removed)


def _dominance(rows: list[LinearConstraint]) -> tuple[list[int], dict[int, int]]:
    """Parallel-row pruning; returns kept indices and removed -> dominating index."""
    removed: dict[int, int] = {}
    best: dict[tuple, int] = {}
    eqs: dict[tuple, int] = {}
    for k, r in enumerate(rows):
        if r.sense == EQ and r.coeffs:
            eqs[r.coeffs] = k
    for k, r in enumerate(rows):
        if r.sense != LE or not r.coeffs:
            continue
        key = r.coeffs
        neg = tuple((v, -c) for v, c in key)
        e = eqs.get(key)
        if e is not None and rows[e].rhs <= r.rhs:
            removed[k] = e
            continue
        e = eqs.get(neg)
        if e is not None and -rows[e].rhs <= r.rhs:
            removed[k] = e
            continue
        j = best.get(key)
        if j is None:
            best[key] = k
        elif rows[j].rhs <= r.rhs:
            removed[k] = j
        else:
            removed[j] = k
            best[key] = k
    # chains: point every removed row at a kept row
    for k in list(removed):
        j = removed[k]
        while j in removed:
            j = removed[j]
        removed[k] = j
    kept = [k for k in range(len(rows)) if k not in removed]
    return kept, removed


def redundancy_report(p: Polyhedron, use_lp: bool = True) -> RedundancyResult:
    rows = list(p.constraints)
    trivial = [k for k, r in enumerate(rows) if r.trivially_true()]
    live = [k for k in range(len(rows)) if k not in set(trivial)]
    sub = [rows[k] for k in live]
    kept_local, dominated_local = _dominance(sub)
    active = [live[k] for k in kept_local]
    dominated = {live[k]: live[j] for k, j in dominated_local.items()}

    if use_lp:
        k_pos = 0
        while k_pos < len(active):
            k = active[k_pos]
            row = rows[k]
            if not row.coeffs or row.sense == EQ:
                k_pos += 1
                continue
            others = Polyhedron(p.variables, [rows[j] for j in active if j != k], canonical=False)
            target = dict(row.coeffs)
            res = maximize(others, target)
            redundant = False
            if res.status == INFEASIBLE:
                redundant = True
            elif res.status == OPTIMAL:
                redundant = res.value <= row.rhs
            if redundant:
                active.pop(k_pos)
            else:
                k_pos += 1

    kept = Polyhedron(p.variables, [rows[k] for k in active], canonical=False)
    pos = {k: i for i, k in enumerate(active)}
    removed: list[Certificate] = []
    for k in range(len(rows)):
        if k in pos:
            continue
        row = rows[k]
        if k in trivial:
            removed.append(Certificate(row, TRIVIAL))
            continue
        j = dominated.get(k)
        if j is not None and j in pos:
            dom = rows[j]
            factor = ONE
            if dom.sense == EQ and dom.coeffs != row.coeffs:
                factor = -ONE
            removed.append(Certificate(row, DOMINATED, dominating=pos[j], factor=factor))
            continue
        removed.append(_lp_certificate(row, kept))
    return RedundancyResult(kept, removed)


def _lp_certificate(row: LinearConstraint, kept: Polyhedron) -> Certificate:
    res = maximize(kept, dict(row.coeffs))
    if res.status == INFEASIBLE:
        return Certificate(row, EMPTY, multipliers=tuple(sorted(res.multipliers.items())))
    if res.status != OPTIMAL:
        raise AssertionError(f"row {row.label!r} marked redundant but LP is {res.status}")
    return Certificate(row, FARKAS, multipliers=tuple(sorted(res.multipliers.items())))


def remove_redundant(p: Polyhedron) -> Polyhedron:
    """Minimal subsystem with the same feasible set (canonical row order).

    Equality rows are kept unless they duplicate another row.
    """
    return Polyhedron(p.variables, redundancy_report(p).kept.constraints)


def prune_dominated(p: Polyhedron) -> Polyhedron:
    """Cheap syntactic pass: drop trivial rows and parallel dominated rows."""
    return Polyhedron(p.variables, redundancy_report(p, use_lp=False).kept.constraints)
