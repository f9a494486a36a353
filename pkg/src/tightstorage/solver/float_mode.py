"""Optional double-precision path (HiGHS through scipy) with exact polishing.

The float solution is never trusted directly.  Its active set (variables at
a bound, inequality rows with zero slack) is re-solved as an exact rational
linear system, and the polished point is checked row by row.  Results from
this path carry ``mode="float"`` and are kept out of certificate code.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint as SciConstraint, linprog, milp

from ..formulations.model import BINARY, ModelInstance
from ..numeric import ZERO, Rational, to_rational
from ..polyhedra.constraint import EQ
from .bnb import period_of
from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, SolveResult

TOL = 1e-9  # feasibility / integrality tolerance of the float path
ACTIVE_TOL = 1e-7  # slack below which a row counts as active when polishing
TIME_LIMIT = "TimeLimit"  # incumbent returned without a proof of optimality


def to_arrays(m: ModelInstance):
    idx = {v: i for i, v in enumerate(m.ids)}
    n = len(idx)
    sign = 1.0 if m.sense == "min" else -1.0
    c = np.zeros(n)
    for v, coef in m.objective.items():
        c[idx[v]] = sign * float(coef)
    rows, cols, vals, lo, hi = [], [], [], [], []
    for k, r in enumerate(m.constraints):
        for v, coef in r.coeffs:
            rows.append(k)
            cols.append(idx[v])
            vals.append(float(coef))
        hi.append(float(r.rhs))
        lo.append(float(r.rhs) if r.sense == EQ else -np.inf)
    A = sparse.csr_array((vals, (rows, cols)), shape=(len(m.constraints), n))
    lb = np.array([-np.inf if v.lb is None else float(v.lb) for v in m.variables])
    ub = np.array([np.inf if v.ub is None else float(v.ub) for v in m.variables])
    integrality = np.array([1 if v.kind == BINARY else 0 for v in m.variables])
    return c, A, np.array(lo), np.array(hi), lb, ub, integrality, sign


def solve_float(m: ModelInstance, polish: bool = True, time_limit: float | None = None) -> SolveResult:
    """Solve with HiGHS (LP or MIP as marked) and polish the result exactly."""
    c, A, lo, hi, lb, ub, integrality, sign = to_arrays(m)
    opts = {"presolve": True}
    if time_limit is not None:
        opts["time_limit"] = time_limit
    if m.is_mip():
        opts["mip_rel_gap"] = 0.0
        res = milp(c, constraints=[SciConstraint(A, lo, hi)] if A.shape[0] else None,
                   integrality=integrality, bounds=Bounds(lb, ub), options=opts)
        nodes = int(getattr(res, "mip_node_count", 0) or 0)
    else:
        eq = lo == hi
        A_ub, b_ub = (A[~eq], hi[~eq]) if (~eq).any() else (None, None)
        A_eq, b_eq = (A[eq], hi[eq]) if eq.any() else (None, None)
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=list(zip([None if np.isinf(x) else x for x in lb],
                                      [None if np.isinf(x) else x for x in ub])),
                      method="highs", options=opts)
        nodes = 1
    if res.status == 2:
        return SolveResult(INFEASIBLE, nodes_explored=nodes, mode="float")
    if res.status == 3:
        return SolveResult(UNBOUNDED, nodes_explored=nodes, mode="float")
    if res.x is None:
        if res.status == 1:
            return SolveResult(TIME_LIMIT, nodes_explored=nodes, mode="float", info={"message": res.message})
        raise RuntimeError(f"float solve failed: {res.message}")
    x = np.asarray(res.x)
    info = {"float_objective": float(sign * res.fun)}
    fixed = {}
    if m.is_mip():
        for v, xv in zip(m.variables, x):
            if v.kind == BINARY:
                fixed[v.id] = to_rational(int(round(xv)))
    if polish:
        point, ok = polish_point(m, x, fixed)
        info["polished"] = ok
    else:
        point = {v: to_rational(Fraction(float(xv)).limit_denominator(10**9)) for v, xv in zip(m.ids, x)}
        info["polished"] = False
    bad = m.violations(point, integrality=m.is_mip())
    info["exact_feasible"] = not bad
    if bad:
        info["worst_violation"] = float(max(a for _, a in bad))
    status = OPTIMAL if res.status == 0 else TIME_LIMIT
    return SolveResult(status, m.evaluate(point), point, nodes_explored=nodes, mode="float", info=info)


def _rat(x: float) -> Rational:
    return to_rational(Fraction(float(x)).limit_denominator(10**6))


def polish_point(m: ModelInstance, x, fixed: dict | None = None) -> tuple[dict, bool]:
    """Exact point on the active set of the float solution ``x``."""
    fixed = dict(fixed or {})
    ids = m.ids
    xv = dict(zip(ids, (float(t) for t in x)))
    values: dict[str, Rational] = {}
    for v in m.variables:
        if v.id in fixed:
            values[v.id] = fixed[v.id]
            continue
        val = xv[v.id]
        for bound in (v.lb, v.ub):
            if bound is not None and abs(val - float(bound)) <= ACTIVE_TOL * (1 + abs(float(bound))):
                values[v.id] = bound
                break
    order = {v: (period_of(v), k) for k, v in enumerate(ids)}
    equations = []
    for r in m.constraints:
        lhs = sum(float(c) * xv[v] for v, c in r.coeffs)
        if r.sense != EQ and float(r.rhs) - lhs > ACTIVE_TOL * (1 + abs(float(r.rhs))):
            continue
        coeffs = {}
        rhs = r.rhs
        for v, c in r.coeffs:
            if v in values:
                rhs -= c * values[v]
            else:
                coeffs[v] = c
        if coeffs or rhs:
            equations.append((min((order[v] for v in coeffs), default=(0, 0)), coeffs, rhs))
    equations.sort(key=lambda e: e[0])

    pivots: dict[str, tuple[dict, Rational]] = {}  # pivot var -> (row without pivot, rhs)
    users: dict[str, set] = {}  # var -> pivot vars whose rows mention it
    consistent = True
    for _, coeffs, rhs in equations:
        coeffs = dict(coeffs)
        for v in [v for v in coeffs if v in pivots]:
            a = coeffs.pop(v)
            row, prhs = pivots[v]
            rhs -= a * prhs
            for w, c in row.items():
                nc = coeffs.get(w, ZERO) - a * c
                if nc:
                    coeffs[w] = nc
                else:
                    coeffs.pop(w, None)
        if not coeffs:
            if rhs:
                consistent = False
            continue
        p = max(coeffs, key=lambda v: order[v])
        a = coeffs.pop(p)
        row = {w: c / a for w, c in coeffs.items()}
        rhs = rhs / a
        # eliminate p from existing pivot rows (Gauss-Jordan keeps rows pivot-free)
        for q in list(users.get(p, ())):
            qrow, qrhs = pivots[q]
            f = qrow.pop(p)
            qrhs -= f * rhs
            for w, c in row.items():
                nc = qrow.get(w, ZERO) - f * c
                if nc:
                    if w not in qrow:
                        users.setdefault(w, set()).add(q)
                    qrow[w] = nc
                else:
                    if w in qrow:
                        del qrow[w]
                        users[w].discard(q)
            pivots[q] = (qrow, qrhs)
        users.pop(p, None)
        pivots[p] = (row, rhs)
        for w in row:
            users.setdefault(w, set()).add(p)
    for v in ids:
        if v not in values and v not in pivots:
            values[v] = _rat(xv[v])
    for p, (row, rhs) in pivots.items():
        values[p] = rhs - sum((c * values[w] for w, c in row.items()), ZERO)
    return {v: values[v] for v in ids}, consistent


__all__ = ["solve_float", "polish_point", "to_arrays", "TOL", "OPTIMAL", "TIME_LIMIT"]
