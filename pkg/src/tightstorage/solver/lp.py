"""Exact LP solves of model instances and the shared result type."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from ..errors import NoSolution
from ..formulations.model import BINARY, ModelInstance
from ..numeric import ONE, ZERO, Rational, format_decimal, format_rational
from ..polyhedra.constraint import EQ
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, CertificateError, solve_standard


@dataclass
class SolveResult:
    status: str
    objective: Rational | None = None
    assignment: dict = field(default_factory=dict)
    nodes_explored: int = 0
    incumbent_history: list = field(default_factory=list)  # (node, objective)
    certificate: dict | None = None  # duals, Farkas vector or ray, keyed by row label / variable
    mode: str = "exact"
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def value(self, vid: str) -> Rational:
        return self.assignment[vid]

    def to_json(self) -> dict:
        doc = {
            "status": self.status,
            "objective": None if self.objective is None else format_rational(self.objective),
            "assignment": {k: format_rational(v) for k, v in self.assignment.items()},
            "nodes": self.nodes_explored,
            "incumbent_history": [[n, format_rational(o)] for n, o in self.incumbent_history],
            "mode": self.mode,
        }
        if self.info:
            doc["info"] = self.info
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    def csv_row(self, label: str = "", places: int = 1) -> list[str]:
        obj = "" if self.objective is None else format_decimal(self.objective, places)
        return [label, self.status, obj, str(self.nodes_explored)]

    def to_csv(self, places: int = 6) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["variable", "value", "exact"])
        for k, v in self.assignment.items():
            w.writerow([k, format_decimal(v, places), format_rational(v)])
        return buf.getvalue()


CSV_HEADER = ["model", "status", "objective", "nodes"]


def standard_form(m: ModelInstance):
    """Map ``m`` to ``min c·z, A z = b, z >= 0``.

    Returns ``(A, b, c, recover, row_labels, offset, sign)`` where ``recover``
    maps a standard solution back to model variables and the model objective
    equals ``sign * (c·z + offset)``.
    """
    ids = m.ids
    # each model variable x = base + sum(coef * z_col)
    cols: dict[str, list[tuple[int, Rational]]] = {}
    base: dict[str, Rational] = {}
    extra_rows: list[tuple[dict[int, Rational], Rational, str]] = []
    n = 0
    for v in m.variables:
        if v.lb is not None:
            base[v.id] = v.lb
            cols[v.id] = [(n, ONE)]
            if v.ub is not None:
                extra_rows.append(({n: ONE}, v.ub - v.lb, f"bound[{v.id}]"))
            n += 1
        elif v.ub is not None:
            base[v.id] = v.ub
            cols[v.id] = [(n, -ONE)]
            n += 1
        else:
            base[v.id] = ZERO
            cols[v.id] = [(n, ONE), (n + 1, -ONE)]
            n += 2
    rows: list[tuple[dict[int, Rational], Rational, str, bool]] = []
    for r in m.constraints:
        coeffs: dict[int, Rational] = {}
        rhs = r.rhs
        for vid, c in r.coeffs:
            rhs -= c * base[vid]
            for j, s in cols[vid]:
                coeffs[j] = coeffs.get(j, ZERO) + c * s
        rows.append((coeffs, rhs, r.label, r.sense != EQ))
    for coeffs, rhs, label in extra_rows:
        rows.append((coeffs, rhs, label, True))
    n_slack = sum(1 for *_, s in rows if s)
    width = n + n_slack
    A, b, labels = [], [], []
    k = n
    for coeffs, rhs, label, slack in rows:
        row = [ZERO] * width
        for j, c in coeffs.items():
            row[j] = c
        if slack:
            row[k] = ONE
            k += 1
        A.append(row)
        b.append(rhs)
        labels.append(label)
    sign = ONE if m.sense == "min" else -ONE
    c = [ZERO] * width
    offset = m.objective.constant
    for vid, coef in m.objective.items():
        offset += coef * base[vid]
        for j, s in cols[vid]:
            c[j] += sign * coef * s
    offset = sign * offset

    def recover(z) -> dict:
        out = {}
        for vid in ids:
            val = base[vid]
            for j, s in cols[vid]:
                val += s * z[j]
            out[vid] = val
        return out

    return A, b, c, recover, labels, offset, sign


def solve_lp(m: ModelInstance, rule: str = "bland", check: bool = True) -> SolveResult:
    """Exact LP optimum of a model without binary marks."""
    if any(v.kind == BINARY for v in m.variables):
        raise ValueError("solve_lp needs a model without binary marks; relax it first")
    A, b, c, recover, labels, offset, sign = standard_form(m)
    if not A:
        # no rows: optimum sits at a bound for every variable
        A = [[ZERO] * len(c)]
        b = [ZERO]
        labels = ["empty"]
    res = solve_standard(A, b, c, rule=rule, check=check)
    if res.status == INFEASIBLE:
        cert = {lab: format_rational(y) for lab, y in zip(labels, res.y) if y}
        return SolveResult(INFEASIBLE, nodes_explored=1, certificate={"farkas": cert})
    if res.status == UNBOUNDED:
        return SolveResult(UNBOUNDED, nodes_explored=1, assignment=recover(res.x),
                           certificate={"ray": recover_direction(m, res.ray, recover)})
    assignment = recover(res.x)
    if check:
        bad = m.violations(assignment, integrality=False)
        if bad:
            raise CertificateError(f"recovered point violates {bad[:3]}")
    objective = sign * (res.objective + offset)
    if check and m.evaluate(assignment) != objective:
        raise CertificateError("objective mismatch after recovery")
    duals = {lab: format_rational(sign * y) for lab, y in zip(labels, res.y) if y}
    return SolveResult(OPTIMAL, objective, assignment, nodes_explored=1, certificate={"duals": duals})


def recover_direction(m: ModelInstance, ray, recover) -> dict:
    zero = recover([ZERO] * len(ray))
    moved = recover(ray)
    return {k: format_rational(moved[k] - zero[k]) for k in moved if moved[k] != zero[k]}


def count_simultaneity(r: SolveResult, m: ModelInstance) -> tuple[int, Rational]:
    """Periods with both charge and discharge positive, and the sum of products."""
    if r.status != OPTIMAL:
        raise NoSolution(f"result status is {r.status}")
    storage = m.meta.get("storage", {})
    pcs, pds = storage.get("pC", []), storage.get("pD", [])
    periods = 0
    total = ZERO
    for pc, pd in zip(pcs, pds):
        a, d = r.assignment[pc], r.assignment[pd]
        if a > 0 and d > 0:
            periods += 1
        total += a * d
    return periods, total


__all__ = ["SolveResult", "solve_lp", "standard_form", "count_simultaneity", "CSV_HEADER", "OPTIMAL",
           "INFEASIBLE", "UNBOUNDED"]
