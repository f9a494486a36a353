"""Scenario assembly: a storage block embedded in a small power system."""
from __future__ import annotations

from ..errors import BadScenario
from ..formulations.builders import build
from ..formulations.model import BINARY, ModelInstance, Variable, relax
from ..formulations.params import BASIC_OF, TIGHT_OF, ReserveProfile
from ..numeric import ZERO, LinearForm
from ..polyhedra.constraint import EQ, GE, LE, LinearConstraint
from .scenario import Scenario

LINE = "x_line"


def gen_var(g: str, t: int) -> str:
    return f"pG_{g}[{t}]"


def commit_var(g: str, t: int) -> str:
    return f"u_{g}[{t}]"


def flow_var(t: int) -> str:
    return f"flow[{t}]"


def _row(coeffs: dict, sense: str, rhs, label: str) -> LinearConstraint:
    return LinearConstraint.make(LinearForm(coeffs), sense, rhs, label)


def storage_family(family: str, tight: bool) -> str:
    """Resolve (basic family, tight flag) to the family actually built."""
    family = family.lower()
    if family in TIGHT_OF:
        return TIGHT_OF[family] if tight else family
    if family in BASIC_OF:
        if not tight:
            raise BadScenario(f"{family} is a tight family; pass tight=True or its basic name")
        return family
    if family == "bof":
        return family
    raise BadScenario(f"unknown storage family {family!r}")


def assemble(s: Scenario, family: str, tight: bool, relaxed: bool = False, **build_kw) -> ModelInstance:
    """Power balance, generator limits and ramps, optional line, plus the storage block.

    ``relaxed`` replaces the storage block by its LP relaxation; line and
    commitment binaries of the surrounding system stay integral.
    """
    s.check()
    fam = storage_family(family, tight)
    T = s.horizon
    rp = ReserveProfile(s.reserve_req, s.reserve_req) if s.reserve_req else None
    build_kw.setdefault("validate", s.validate_storage)
    block = build(fam, s.storage, T, rp, initial=s.initial, **build_kw)
    if relaxed:
        block = relax(block)
    storage = block.meta["storage"]
    pcs, pds = storage["pC"], storage["pD"]

    variables: list[Variable] = []
    rows: list[LinearConstraint] = []
    cost: dict[str, object] = {}
    for g in s.generators:
        for t in range(1, T + 1):
            p = gen_var(g.id, t)
            if g.committed:
                u = commit_var(g.id, t)
                variables += [Variable(p, ZERO, None), Variable(u, 0, 1, BINARY)]
                if g.p_max is not None:
                    rows.append(_row({p: 1, u: -g.p_max}, LE, 0, f"eq:gen-max[{g.id},t={t}]"))
                rows.append(_row({p: 1, u: -g.p_min}, GE, 0, f"eq:gen-min[{g.id},t={t}]"))
                if g.cost_fixed:
                    cost[u] = g.cost_fixed
            else:
                variables.append(Variable(p, ZERO, g.p_max))
            if g.cost_linear:
                cost[p] = g.cost_linear
            if t == 1:
                if g.initial_output is None:
                    continue
                prev = LinearForm({}, g.initial_output)
            else:
                prev = LinearForm({gen_var(g.id, t - 1): 1})
            step = LinearForm({p: 1}) - prev
            if g.ramp_up is not None:
                rows.append(LinearConstraint.make(step, LE, g.ramp_up, f"eq:ramp-up[{g.id},t={t}]"))
            if g.ramp_down is not None:
                rows.append(LinearConstraint.make(step, GE, -g.ramp_down, f"eq:ramp-down[{g.id},t={t}]"))

    if s.line is not None:
        variables.append(Variable(LINE, 0, 1, BINARY))
        cost[LINE] = s.line.cost
        for t in range(1, T + 1):
            f = flow_var(t)
            variables.append(Variable(f, None, None))
            rows.append(_row({f: 1, LINE: -s.line.capacity}, LE, 0, f"eq:line-cap[t={t}]"))
            rows.append(_row({f: -1, LINE: -s.line.capacity}, LE, 0, f"eq:line-cap[t={t}]"))

    for b in s.buses:
        for t in range(1, T + 1):
            coeffs: dict[str, object] = {gen_var(g.id, t): 1 for g in s.generators if g.bus == b}
            if b == s.storage_bus:
                coeffs[pds[t - 1]] = 1
                coeffs[pcs[t - 1]] = -1
            if s.line is not None and b in (s.line.from_bus, s.line.to_bus):
                coeffs[flow_var(t)] = -1 if b == s.line.from_bus else 1
            demand = s.demand.get(b, ())
            rows.append(_row(coeffs, EQ, demand[t - 1] if demand else 0, f"eq:power-balance[{b},t={t}]"))

    if s.objective == "investment":
        cost = {k: v for k, v in cost.items() if k == LINE}
        for k, v in s.investment_costs.items():
            cost[k] = v
    return block.extend(variables, rows, LinearForm(cost), scenario=s.name, tight=tight)


__all__ = ["assemble", "storage_family", "gen_var", "commit_var", "flow_var", "LINE"]
