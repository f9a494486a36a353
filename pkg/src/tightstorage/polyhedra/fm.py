"""Fourier–Motzkin projection with equality substitution and pruning."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..numeric import LinearForm, combine
from .constraint import EQ, LE, LinearConstraint, Polyhedron
from .redundancy import prune_dominated, remove_redundant

_LABEL_LIMIT = 60


def _short(label: str) -> str:
    if len(label) <= _LABEL_LIMIT:
        return label
    return "#" + hashlib.sha1(label.encode()).hexdigest()[:8]


def _as_form(row: LinearConstraint) -> LinearForm:
    """``a·x - b`` so the row reads ``form (<= | ==) 0``."""
    return LinearForm(dict(row.coeffs), -row.rhs)


@dataclass(frozen=True)
class Combination:
    lower: LinearConstraint
    upper: LinearConstraint
    result: LinearConstraint


def substitute_equality(p: Polyhedron, var: str) -> tuple[Polyhedron, LinearConstraint] | None:
    """Use the first equality row mentioning ``var`` to eliminate it."""
    pivot = next((r for r in p.constraints if r.sense == EQ and r.coef(var)), None)
    if pivot is None:
        return None
    a = pivot.coef(var)
    pf = _as_form(pivot)
    rows = []
    tag = f"sub[{var}]<{_short(pivot.label)}>"
    for r in p.constraints:
        if r is pivot:
            continue
        c = r.coef(var)
        if not c:
            rows.append(r)
            continue
        form = combine(_as_form(r), 1, pf, -c / a)
        rows.append(LinearConstraint.make(form, r.sense, 0, f"{_short(r.label)}|{tag}"))
    keep = [v for v in p.variables if v != var]
    return Polyhedron(keep, rows), pivot


def fm_combinations(p: Polyhedron, var: str) -> tuple[list[Combination], list[LinearConstraint]]:
    """All lower/upper pairings on ``var`` plus the rows not mentioning it."""
    lowers = [r for r in p.constraints if r.sense == LE and r.coef(var) < 0]
    uppers = [r for r in p.constraints if r.sense == LE and r.coef(var) > 0]
    if any(r.sense == EQ and r.coef(var) for r in p.constraints):
        raise ValueError(f"{var} appears in an equality row; substitute first")
    rest = [r for r in p.constraints if not r.coef(var)]
    out = []
    for lo in lowers:
        cl = -lo.coef(var)
        for up in uppers:
            cu = up.coef(var)
            form = combine(_as_form(lo), cu, _as_form(up), cl)
            row = LinearConstraint.make(form, LE, 0, f"fm[{var}]<{_short(lo.label)}|{_short(up.label)}>")
            out.append(Combination(lo, up, row))
    return out, rest


def fm_eliminate(p: Polyhedron, var: str, prune: bool = True) -> Polyhedron:
    """Exact projection of ``p`` along ``var``.

    Equality rows mentioning ``var`` are used as substitutions.  With
    ``prune`` the result is passed through dominance pruning and exact LP
    redundancy removal, which keeps the same feasible set.
    """
    if var not in p.variables:
        raise ValueError(f"{var} is not a variable of the polyhedron")
    keep = [v for v in p.variables if v != var]
    sub = substitute_equality(p, var)
    if sub is not None:
        out = sub[0]
    else:
        combos, rest = fm_combinations(p, var)
        out = Polyhedron(keep, rest + [c.result for c in combos])
    if prune:
        out = remove_redundant(out)
    return out


def elimination_order_key(p: Polyhedron, var: str) -> tuple:
    lo = sum(1 for r in p.constraints if r.sense == LE and r.coef(var) < 0)
    up = sum(1 for r in p.constraints if r.sense == LE and r.coef(var) > 0)
    return (lo * up - lo - up, p.variables.index(var))


def project(p: Polyhedron, keep: Sequence[str], trace: list | None = None) -> Polyhedron:
    """Project onto ``keep`` (in that variable order) and remove redundancy.

    Variables in equality rows are substituted first; otherwise the variable
    whose elimination adds the fewest rows goes next (ties by declaration
    order).  ``trace`` receives ``(var, rows_after)`` pairs when given.
    """
    missing = [v for v in keep if v not in p.variables]
    if missing:
        raise ValueError(f"cannot keep undeclared variables {missing}")
    drop = [v for v in p.variables if v not in set(keep)]
    cur = prune_dominated(p)
    while drop:
        in_eq = [v for v in drop if any(r.sense == EQ and r.coef(v) for r in cur.constraints)]
        if in_eq:
            var = in_eq[0]
            cur = prune_dominated(fm_eliminate(cur, var, prune=False))
        else:
            var = min(drop, key=lambda v: elimination_order_key(cur, v))
            cur = fm_eliminate(cur, var, prune=True)
        drop.remove(var)
        if trace is not None:
            trace.append((var, len(cur.constraints)))
    out = Polyhedron(list(keep), cur.constraints)
    return remove_redundant(out)


def eliminate_all(p: Polyhedron, variables: Iterable[str]) -> Polyhedron:
    keep = [v for v in p.variables if v not in set(variables)]
    return project(p, keep)
