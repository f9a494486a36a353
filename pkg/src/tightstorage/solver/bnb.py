"""Depth-first branch-and-bound over binary variables with exact node LPs."""
from __future__ import annotations

import re
from dataclasses import replace

from ..errors import NodeLimit
from ..formulations.model import BINARY, CONTINUOUS, ModelInstance, Variable
from ..numeric import ONE, ZERO
from .lp import OPTIMAL, UNBOUNDED, SolveResult, solve_lp
from .simplex import INFEASIBLE

DEFAULT_NODE_LIMIT = 10**6
_PERIOD = re.compile(r"\[(\d+)\]$")


def period_of(vid: str) -> int:
    m = _PERIOD.search(vid)
    return int(m.group(1)) if m else 0


def _half(x) -> object:
    return abs(x - ONE / 2)


def choose_branch(assignment: dict, binaries: list[str]) -> str | None:
    """Most fractional binary; ties by lowest period, then name."""
    frac = [b for b in binaries if assignment[b] not in (0, 1)]
    if not frac:
        return None
    return min(frac, key=lambda b: (_half(assignment[b]), period_of(b), b))


def _node_model(base: ModelInstance, fixed: dict) -> ModelInstance:
    vs = []
    for v in base.variables:
        if v.kind == BINARY:
            if v.id in fixed:
                vs.append(Variable(v.id, fixed[v.id], fixed[v.id], CONTINUOUS))
            else:
                vs.append(Variable(v.id, ZERO, ONE, CONTINUOUS))
        else:
            vs.append(v)
    return replace(base, variables=tuple(vs))


def solve_mip(m: ModelInstance, branching: str = "most-fractional", node_limit: int = DEFAULT_NODE_LIMIT,
              rule: str = "bland") -> SolveResult:
    """Exact MIP optimum by depth-first search, exploring ``x=1`` before ``x=0``."""
    if branching != "most-fractional":
        raise ValueError(f"unknown branching rule {branching!r}")
    binaries = m.binaries()
    minimize = m.sense == "min"
    best = None
    best_obj = None
    history = []
    nodes = 0
    stack: list[dict] = [{}]
    while stack:
        fixed = stack.pop()
        if nodes >= node_limit:
            raise NodeLimit(node_limit, nodes)
        nodes += 1
        res = solve_lp(_node_model(m, fixed), rule=rule)
        if res.status == INFEASIBLE:
            continue
        if res.status == UNBOUNDED:
            return SolveResult(UNBOUNDED, nodes_explored=nodes, incumbent_history=history)
        obj = res.objective
        if best_obj is not None and (obj >= best_obj if minimize else obj <= best_obj):
            continue
        var = choose_branch(res.assignment, binaries)
        if var is None:
            best, best_obj = res.assignment, obj
            history.append((nodes, obj))
            continue
        stack.append({**fixed, var: ZERO})
        stack.append({**fixed, var: ONE})
    if best is None:
        return SolveResult(INFEASIBLE, nodes_explored=nodes)
    return SolveResult(OPTIMAL, best_obj, best, nodes_explored=nodes, incumbent_history=history)


def solve(m: ModelInstance, node_limit: int = DEFAULT_NODE_LIMIT, rule: str = "bland") -> SolveResult:
    """Dispatch: LP solve without binaries, branch-and-bound otherwise."""
    if m.is_mip():
        return solve_mip(m, node_limit=node_limit, rule=rule)
    return solve_lp(m, rule=rule)


__all__ = ["solve_mip", "solve", "choose_branch", "period_of", "DEFAULT_NODE_LIMIT", "OPTIMAL"]
