"""Storage parameters, reserve profiles, and tightness-assumption checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping

from ..numeric import ONE, ZERO, Rational, format_rational, to_rational

OPERATION = ("bo", "to")
RESERVES = ("bor", "tor", "bof")
INVESTMENT = ("bir", "tir")
FAMILIES = OPERATION + RESERVES + INVESTMENT

# basic -> tight counterpart, used by hull certification and case runners
TIGHT_OF = {"bo": "to", "bor": "tor", "bir": "tir"}
BASIC_OF = {v: k for k, v in TIGHT_OF.items()}


@dataclass(frozen=True)
class StorageParams:
    """Every storage symbol, exact.  Units: MWh, MW, hours."""

    E_min: Rational = ZERO
    E_max: Rational = ZERO
    P_C_max: Rational = ZERO
    P_D_max: Rational = ZERO
    eta_C: Rational = ONE
    eta_D: Rational = ONE
    delta_t: Rational = ONE
    R_up: Rational = ZERO
    R_down: Rational = ZERO
    E0_installed: Rational = ZERO
    PC0_installed: Rational = ZERO
    PD0_installed: Rational = ZERO
    C_max: Rational = ZERO
    D_max: Rational = ZERO
    E_invest_max: Rational = ZERO
    theta: Rational = ZERO
    e_initial: Rational | None = None

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                object.__setattr__(self, f.name, to_rational(v))

    @property
    def initial(self) -> Rational:
        """Fixed initial state of charge; defaults to ``E_min``."""
        return self.e_initial if self.e_initial is not None else self.E_min

    def with_(self, **changes) -> "StorageParams":
        return replace(self, **changes)

    def to_json(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                out[f.name] = format_rational(v)
        return out

    @staticmethod
    def from_json(doc: Mapping) -> "StorageParams":
        names = {f.name for f in fields(StorageParams)}
        unknown = [k for k in doc if k not in names and not k.startswith("_")]
        if unknown:
            raise ValueError(f"unknown parameter keys: {unknown}")
        return StorageParams(**{k: to_rational(v) for k, v in doc.items() if k in names and v is not None})

    @staticmethod
    def load(path: str | Path) -> "StorageParams":
        doc = json.loads(Path(path).read_text())
        return StorageParams.from_json(doc.get("storage", doc))


@dataclass(frozen=True)
class ReserveProfile:
    r_up_min: tuple = ()
    r_down_min: tuple = ()

    def __post_init__(self):
        up = tuple(to_rational(x) for x in self.r_up_min)
        dn = tuple(to_rational(x) for x in self.r_down_min)
        if any(x < 0 for x in up + dn):
            raise ValueError("reserve minima must be nonnegative")
        object.__setattr__(self, "r_up_min", up)
        object.__setattr__(self, "r_down_min", dn)

    @staticmethod
    def constant(T: int, up=0, down=0) -> "ReserveProfile":
        return ReserveProfile((up,) * T, (down,) * T)

    def up(self, t: int) -> Rational:
        return self.r_up_min[t - 1] if t - 1 < len(self.r_up_min) else ZERO

    def down(self, t: int) -> Rational:
        return self.r_down_min[t - 1] if t - 1 < len(self.r_down_min) else ZERO

    def to_json(self) -> dict:
        return {"r_up_min": [format_rational(x) for x in self.r_up_min],
                "r_down_min": [format_rational(x) for x in self.r_down_min]}

    @staticmethod
    def from_json(doc: Mapping) -> "ReserveProfile":
        return ReserveProfile(tuple(doc.get("r_up_min", ())), tuple(doc.get("r_down_min", ())))


@dataclass(frozen=True)
class Violation:
    name: str  # parameter most directly responsible
    inequality: str  # the failed requirement, human readable
    lhs: Rational | None = None
    rhs: Rational | None = None

    def __str__(self) -> str:
        if self.lhs is None:
            return f"{self.name}: {self.inequality}"
        return f"{self.name}: {self.inequality} ({format_rational(self.lhs)} vs {format_rational(self.rhs)})"

    def to_json(self) -> dict:
        doc = {"name": self.name, "inequality": self.inequality}
        if self.lhs is not None:
            doc["lhs"] = format_rational(self.lhs)
            doc["rhs"] = format_rational(self.rhs)
        return doc


def charge_limit(p: StorageParams) -> Rational:
    """(Ē − E̲)/(ηᶜΔ): the most one period of charging can fill."""
    return (p.E_max - p.E_min) / (p.eta_C * p.delta_t)


def discharge_limit(p: StorageParams) -> Rational:
    """ηᴰ(Ē − E̲)/Δ: the most one period of discharging can empty."""
    return p.eta_D * (p.E_max - p.E_min) / p.delta_t


def validate_params(p: StorageParams, family: str) -> list[Violation]:
    """Return the violated requirements for ``family`` (empty when valid)."""
    family = family.lower()
    if family not in FAMILIES:
        raise ValueError(f"unknown model family {family!r}")
    out: list[Violation] = []

    def need(ok: bool, name: str, text: str, lhs=None, rhs=None):
        if not ok:
            out.append(Violation(name, text, lhs, rhs))

    need(0 < p.eta_C <= 1, "eta_C", "0 < ηᶜ <= 1 violated", p.eta_C, ONE)
    need(0 < p.eta_D <= 1, "eta_D", "0 < ηᴰ <= 1 violated", p.eta_D, ONE)
    need(p.delta_t > 0, "delta_t", "Δ > 0 violated", p.delta_t, ZERO)
    for name in ("P_C_max", "P_D_max", "R_up", "R_down", "E0_installed", "PC0_installed", "PD0_installed",
                 "C_max", "D_max", "E_invest_max"):
        v = getattr(p, name)
        need(v >= 0, name, f"{name} >= 0 violated", v, ZERO)
    need(0 <= p.theta < 1, "theta", "0 <= θ < 1 violated", p.theta, ONE)
    if out:
        return out

    if family in OPERATION + RESERVES:
        need(p.E_min >= 0, "E_min", "E̲ >= 0 violated", p.E_min, ZERO)
        need(p.E_max > p.E_min, "E_max", "Ē > E̲ violated", p.E_max, p.E_min)
        if p.E_max > p.E_min:
            cl, dl = charge_limit(p), discharge_limit(p)
            need(p.P_C_max <= cl, "P_C_max", "P̄ᶜ > (1/(ηᶜΔ))(Ē−E̲)", p.P_C_max, cl)
            need(p.P_D_max <= dl, "P_D_max", "P̄ᴰ > (ηᴰ/Δ)(Ē−E̲)", p.P_D_max, dl)
            if family in RESERVES:
                need(p.R_down <= cl, "R_down", "R⁻ > (1/(ηᶜΔ))(Ē−E̲)", p.R_down, cl)
                need(p.R_up <= dl, "R_up", "R⁺ > (ηᴰ/Δ)(Ē−E̲)", p.R_up, dl)
        if p.e_initial is not None:
            need(p.E_min <= p.e_initial <= p.E_max, "e_initial", "E̲ <= e₀ <= Ē violated", p.e_initial, p.E_max)
    else:
        total = p.E0_installed + p.E_invest_max
        cl = total * (1 - p.theta) / (p.eta_C * p.delta_t)
        dl = p.eta_D * total * (1 - p.theta) / p.delta_t
        need(p.PC0_installed + p.C_max <= cl, "C_max", "P̄ᶜ₀ + C > (1/(ηᶜΔ))(Ē₀+E)(1−θ)",
             p.PC0_installed + p.C_max, cl)
        need(p.PD0_installed + p.D_max <= dl, "D_max", "P̄ᴰ₀ + D > (ηᴰ/Δ)(Ē₀+E)(1−θ)",
             p.PD0_installed + p.D_max, dl)
        if p.e_initial is not None:
            need(p.theta * p.E0_installed <= p.e_initial <= total, "e_initial",
                 "θĒ₀ <= e₀ <= Ē₀+E violated", p.e_initial, total)
    return out
