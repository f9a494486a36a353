"""Scenario data: generators, demand, storage placement, optional candidate line."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..errors import BadScenario
from ..formulations.params import StorageParams
from ..numeric import ZERO, Rational, format_rational, to_rational

DATA_ENV = "TIGHT_STORAGE_DATA"
PROVENANCE = ("paper-complete", "approximated")


def data_dir() -> Path:
    """Bundled data directory, overridable through ``TIGHT_STORAGE_DATA``."""
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("tightstorage") / "data"))


def _opt(doc: Mapping, key: str):
    v = doc.get(key)
    return None if v is None else to_rational(v)


@dataclass(frozen=True)
class GeneratorSpec:
    id: str
    bus: str
    p_min: Rational = ZERO
    p_max: Rational | None = None
    ramp_up: Rational | None = None
    ramp_down: Rational | None = None
    cost_linear: Rational = ZERO
    cost_fixed: Rational = ZERO
    initial_output: Rational | None = None

    def __post_init__(self):
        if self.p_max is not None and self.p_min > self.p_max:
            raise BadScenario(f"generator {self.id}: p_min > p_max")
        for r in (self.ramp_up, self.ramp_down):
            if r is not None and r < 0:
                raise BadScenario(f"generator {self.id}: negative ramp")

    @property
    def committed(self) -> bool:
        """Needs an on/off binary: a minimum output or a fixed cost."""
        return self.p_min > 0 or self.cost_fixed > 0

    @staticmethod
    def from_json(doc: Mapping, strict: bool = True) -> "GeneratorSpec":
        missing = [k for k in ("id", "bus", "cost_linear") if doc.get(k) is None]
        if missing and (strict or "id" in missing or "bus" in missing):
            raise BadScenario(f"generator entry missing {missing}")
        return GeneratorSpec(doc["id"], doc["bus"], _opt(doc, "p_min") or ZERO, _opt(doc, "p_max"),
                             _opt(doc, "ramp_up"), _opt(doc, "ramp_down"), _opt(doc, "cost_linear") or ZERO,
                             _opt(doc, "cost_fixed") or ZERO, _opt(doc, "initial_output"))

    def to_json(self) -> dict:
        out = {"id": self.id, "bus": self.bus}
        for k in ("p_min", "p_max", "ramp_up", "ramp_down", "cost_linear", "cost_fixed", "initial_output"):
            v = getattr(self, k)
            if v is not None:
                out[k] = format_rational(v)
        return out


@dataclass(frozen=True)
class LineSpec:
    from_bus: str
    to_bus: str
    cost: Rational
    capacity: Rational | None


@dataclass(frozen=True)
class Scenario:
    name: str
    buses: tuple
    demand: dict  # bus -> tuple of MW per period
    generators: tuple
    storage: StorageParams
    storage_bus: str
    reserve_req: tuple = ()  # MW per period, applied to both directions
    line: LineSpec | None = None
    objective: str = "operational"  # or "investment"
    investment_costs: dict = field(default_factory=dict)
    initial: str = "fixed"
    validate_storage: bool = True  # False admits storage data that fail the tightness bounds
    provenance: str = "approximated"
    complete: bool = True
    notes: str = ""
    expected: dict = field(default_factory=dict)

    @property
    def horizon(self) -> int:
        return len(next(iter(self.demand.values()))) if self.demand else 0

    def check(self) -> None:
        if self.provenance not in PROVENANCE:
            raise BadScenario(f"provenance must be one of {PROVENANCE}")
        if not self.complete:
            raise BadScenario(f"scenario {self.name!r} is an incomplete template ({self.notes})")
        lengths = {len(v) for v in self.demand.values()}
        if len(lengths) != 1 or 0 in lengths:
            raise BadScenario("demand series must share one nonzero horizon")
        T = self.horizon
        if self.reserve_req and len(self.reserve_req) != T:
            raise BadScenario(f"reserve_req has {len(self.reserve_req)} periods, demand has {T}")
        buses = set(self.buses)
        if set(self.demand) - buses or self.storage_bus not in buses:
            raise BadScenario("demand or storage refers to an unknown bus")
        for g in self.generators:
            if g.bus not in buses:
                raise BadScenario(f"generator {g.id} sits at unknown bus {g.bus}")
        if self.line and {self.line.from_bus, self.line.to_bus} - buses:
            raise BadScenario("line endpoints must be known buses")
        if self.line and self.line.capacity is None:
            raise BadScenario("line capacity missing")
        if self.objective not in ("operational", "investment"):
            raise BadScenario("objective must be 'operational' or 'investment'")
        if self.initial not in ("fixed", "variable"):
            raise BadScenario("initial must be 'fixed' or 'variable'")

    @staticmethod
    def from_json(doc: Mapping) -> "Scenario":
        try:
            repeat = int(doc.get("repeat", 1))
            demand = {b: tuple(to_rational(x) for x in v) * repeat for b, v in doc["demand"].items()}
            req = doc.get("reserve_req", ())
            if isinstance(req, Mapping):  # {"fraction_of_demand": f, "bus": b}
                frac = to_rational(req["fraction_of_demand"])
                req = tuple(frac * d for d in demand[req.get("bus", doc["storage"]["bus"])])
            else:
                req = tuple(to_rational(x) for x in req) * repeat
            line = doc.get("line")
            if line is not None:
                line = LineSpec(line["from"], line["to"], to_rational(line["cost"]), _opt(line, "capacity"))
            st = doc["storage"]
            complete = bool(doc.get("complete", True))
            return Scenario(
                name=doc.get("name", ""),
                buses=tuple(doc["buses"]),
                demand=demand,
                generators=tuple(GeneratorSpec.from_json(g, complete) for g in doc["generators"]),
                storage=StorageParams.from_json(st["params"]),
                storage_bus=st["bus"],
                reserve_req=req,
                line=line,
                objective=doc.get("objective", "operational"),
                investment_costs={k: to_rational(v) for k, v in doc.get("investment_costs", {}).items()},
                initial=st.get("initial", "fixed"),
                validate_storage=bool(st.get("validate", True)),
                provenance=doc.get("provenance", "approximated"),
                complete=complete,
                notes=doc.get("notes", ""),
                expected=dict(doc.get("expected", {})),
            )
        except BadScenario:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise BadScenario(f"malformed scenario: {exc!r}") from exc

    @staticmethod
    def load(path: str | Path) -> "Scenario":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise BadScenario(f"cannot read scenario {path}: {exc}") from exc
        return Scenario.from_json(doc)


CASES = ("uc", "uc-reserves", "tep", "multiperiod")
DATASETS = ("approximated", "paper-faithful")


def scenario_path(case: str, dataset: str = "approximated", root: Path | None = None) -> Path:
    if case not in CASES:
        raise BadScenario(f"unknown case {case!r}; expected one of {CASES}")
    if dataset not in DATASETS:
        raise BadScenario(f"unknown dataset {dataset!r}; expected one of {DATASETS}")
    return (root or data_dir()) / "scenarios" / case / f"{dataset}.json"


def load_case(case: str, dataset: str = "approximated", root: Path | None = None) -> Scenario:
    return Scenario.load(scenario_path(case, dataset, root))


__all__ = ["GeneratorSpec", "LineSpec", "Scenario", "data_dir", "load_case", "scenario_path", "CASES",
           "DATASETS", "DATA_ENV"]
