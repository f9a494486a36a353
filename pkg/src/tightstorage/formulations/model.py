"""Model instances: variables with bounds and integrality, rows, objective."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

from ..numeric import ONE, ZERO, LinearForm, Rational, format_decimal, format_rational, to_rational
from ..polyhedra.constraint import EQ, LE, LinearConstraint, Polyhedron

CONTINUOUS = "continuous"
BINARY = "binary"


@dataclass(frozen=True)
class Variable:
    id: str
    lb: Rational | None = ZERO
    ub: Rational | None = None
    kind: str = CONTINUOUS

    def __post_init__(self):
        if self.lb is not None:
            object.__setattr__(self, "lb", to_rational(self.lb))
        if self.ub is not None:
            object.__setattr__(self, "ub", to_rational(self.ub))
        if self.kind == BINARY and (self.lb != 0 or self.ub != 1):
            raise ValueError(f"binary variable {self.id} must have bounds [0, 1]")

    def to_json(self) -> dict:
        return {"id": self.id,
                "lb": None if self.lb is None else format_rational(self.lb),
                "ub": None if self.ub is None else format_rational(self.ub),
                "kind": self.kind}

    @staticmethod
    def from_json(doc: Mapping) -> "Variable":
        return Variable(doc["id"], None if doc.get("lb") is None else to_rational(doc["lb"]),
                        None if doc.get("ub") is None else to_rational(doc["ub"]), doc.get("kind", CONTINUOUS))


@dataclass(frozen=True)
class ModelInstance:
    variables: tuple
    constraints: tuple
    objective: LinearForm = field(default_factory=LinearForm)
    sense: str = "min"
    horizon: int = 0
    family: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ids = [v.id for v in self.variables]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate variable ids")
        known = set(ids)
        for r in self.constraints:
            bad = [v for v in r.variables() if v not in known]
            if bad:
                raise ValueError(f"row {r.label!r} uses undeclared {bad}")
        bad = [v for v in self.objective.variables() if v not in known]
        if bad:
            raise ValueError(f"objective uses undeclared {bad}")

    @property
    def ids(self) -> list[str]:
        return [v.id for v in self.variables]

    def var(self, vid: str) -> Variable:
        for v in self.variables:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def binaries(self) -> list[str]:
        return [v.id for v in self.variables if v.kind == BINARY]

    def is_mip(self) -> bool:
        return any(v.kind == BINARY for v in self.variables)

    def bound_rows(self) -> list[LinearConstraint]:
        rows = []
        for v in self.variables:
            if v.lb is not None and v.ub is not None and v.lb == v.ub:
                rows.append(LinearConstraint.make(LinearForm({v.id: 1}), EQ, v.lb, f"bound[{v.id}]"))
                continue
            if v.lb is not None:
                rows.append(LinearConstraint.make(LinearForm({v.id: -1}), LE, -v.lb, f"bound[{v.id}]"))
            if v.ub is not None:
                rows.append(LinearConstraint.make(LinearForm({v.id: 1}), LE, v.ub, f"bound[{v.id}]"))
        return rows

    def to_polyhedron(self, include_bounds: bool = True) -> Polyhedron:
        rows = list(self.constraints) + (self.bound_rows() if include_bounds else [])
        return Polyhedron(self.ids, rows)

    def violations(self, point: Mapping[str, object], integrality: bool = True) -> list[tuple[str, Rational]]:
        """Rows, bounds and integrality marks the point violates, with amounts."""
        pt = {k: to_rational(v) for k, v in point.items()}
        out = []
        for r in list(self.constraints) + self.bound_rows():
            amt = r.source_violation(pt)
            if amt:
                out.append((r.label, amt))
        if integrality:
            for v in self.variables:
                if v.kind == BINARY and pt[v.id] not in (0, 1):
                    out.append((f"integrality[{v.id}]", min(pt[v.id], 1 - pt[v.id])))
        return out

    def is_feasible(self, point: Mapping[str, object], integrality: bool = True) -> bool:
        return not self.violations(point, integrality)

    def evaluate(self, point: Mapping[str, object]) -> Rational:
        return self.objective.evaluate({k: to_rational(v) for k, v in point.items()})

    def with_objective(self, objective: LinearForm, sense: str = "min") -> "ModelInstance":
        if sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        return replace(self, objective=objective, sense=sense)

    def with_bounds(self, bounds: Mapping[str, tuple]) -> "ModelInstance":
        vs = []
        for v in self.variables:
            if v.id in bounds:
                lb, ub = bounds[v.id]
                vs.append(Variable(v.id, lb, ub, CONTINUOUS if v.kind == BINARY and (lb, ub) != (0, 1) else v.kind))
            else:
                vs.append(v)
        return replace(self, variables=tuple(vs))

    def fix(self, values: Mapping[str, object]) -> "ModelInstance":
        return self.with_bounds({k: (to_rational(v), to_rational(v)) for k, v in values.items()})

    def extend(self, variables: Iterable[Variable] = (), constraints: Iterable[LinearConstraint] = (),
               objective: LinearForm | None = None, **meta) -> "ModelInstance":
        merged = dict(self.meta)
        merged.update(meta)
        return replace(self, variables=self.variables + tuple(variables),
                       constraints=self.constraints + tuple(constraints),
                       objective=self.objective if objective is None else objective, meta=merged)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "horizon": self.horizon,
            "variables": [v.to_json() for v in self.variables],
            "constraints": [r.to_json() for r in self.constraints],
            "objective": {"sense": self.sense,
                          "coeffs": {k: format_rational(c) for k, c in sorted(self.objective.items())},
                          "constant": format_rational(self.objective.constant)},
            "meta": _jsonable(self.meta),
        }

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @staticmethod
    def from_json(doc: Mapping) -> "ModelInstance":
        obj = doc.get("objective", {})
        form = LinearForm({k: to_rational(c) for k, c in obj.get("coeffs", {}).items()},
                          to_rational(obj.get("constant", "0")))
        return ModelInstance(
            variables=tuple(Variable.from_json(v) for v in doc["variables"]),
            constraints=tuple(LinearConstraint.from_json(c) for c in doc["constraints"]),
            objective=form,
            sense=obj.get("sense", "min"),
            horizon=int(doc.get("horizon", 0)),
            family=doc.get("family", ""),
            meta=dict(doc.get("meta", {})),
        )

    @staticmethod
    def load(path: str | Path) -> "ModelInstance":
        return ModelInstance.from_json(json.loads(Path(path).read_text()))

    def to_lp_text(self, precision: int = 12) -> str:
        """CPLEX-LP-like text for cross-checking with external solvers.

        Exact rationals are rendered as decimals with ``precision`` places.
        """
        def num(q):
            return format_decimal(q, precision)

        def terms(items):
            parts = []
            for v, c in items:
                sign = "-" if c < 0 else "+"
                parts.append(f"{sign} {num(abs(c))} {_lp_name(v)}")
            return " ".join(parts) if parts else "0"

        lines = [f"\\ precision {precision} decimal places", "Minimize" if self.sense == "min" else "Maximize"]
        lines.append(f" obj: {terms(sorted(self.objective.items()))}")
        lines.append("Subject To")
        for k, r in enumerate(self.constraints):
            sym = "=" if r.sense == EQ else "<="
            lines.append(f" c{k}: {terms(r.coeffs)} {sym} {num(r.rhs)}")
        lines.append("Bounds")
        for v in self.variables:
            lo = "-inf" if v.lb is None else num(v.lb)
            hi = "+inf" if v.ub is None else num(v.ub)
            lines.append(f" {lo} <= {_lp_name(v.id)} <= {hi}")
        bins = self.binaries()
        if bins:
            lines.append("Binary")
            lines.append(" " + " ".join(_lp_name(b) for b in bins))
        lines.append("End")
        return "\n".join(lines) + "\n"


def _lp_name(v: str) -> str:
    return v.replace("[", "(").replace("]", ")").replace("^", "_")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return format_rational(obj)


def relax(m: ModelInstance) -> ModelInstance:
    """Drop integrality: binaries become continuous on [0, 1]."""
    vs = tuple(Variable(v.id, ZERO, ONE, CONTINUOUS) if v.kind == BINARY else v for v in m.variables)
    meta = dict(m.meta)
    meta["relaxed"] = True
    return replace(m, variables=vs, meta=meta)
