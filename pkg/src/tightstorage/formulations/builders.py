"""Builders for the basic and tight storage formulations.

Row labels carry the source equation key and the period, e.g.
``eq:bso-c[t=1]``.  Energy is tracked at the end of each period; the
initial state ``e[0]`` is a constant (``initial="fixed"``, the default) or a
bounded variable (``initial="variable"``).
"""
from __future__ import annotations

from ..errors import InvalidParams
from ..numeric import ONE, ZERO, LinearForm, Rational
from ..polyhedra.constraint import EQ, GE, LE, LinearConstraint
from .model import BINARY, ModelInstance, Variable
from .params import ReserveProfile, StorageParams, validate_params


def name(base: str, t: int) -> str:
    return f"{base}[{t}]"


E, PC, PD, DELTA = "e", "pC", "pD", "delta"
RCUP, RCDN, RDUP, RDDN = "rCup", "rCdn", "rDup", "rDdn"
RUP, RDN = "rup", "rdn"
C_INV, D_INV, E_INV = "c_inv", "d_inv", "e_inv"


class _Builder:
    def __init__(self, p: StorageParams, T: int, family: str, initial: str, validate: bool):
        if T < 1:
            raise ValueError("horizon must be at least one period")
        if initial not in ("fixed", "variable"):
            raise ValueError("initial must be 'fixed' or 'variable'")
        if validate:
            bad = validate_params(p, family)
            if bad:
                raise InvalidParams(bad)
        self.p = p
        self.T = T
        self.family = family
        self.initial = initial
        self.vars: list[Variable] = []
        self.rows: list[LinearConstraint] = []
        self.storage: dict[str, list[str]] = {}

    def add_var(self, vid: str, lb=ZERO, ub=None, kind="continuous", role: str | None = None) -> str:
        self.vars.append(Variable(vid, lb, ub, kind))
        if role:
            self.storage.setdefault(role, []).append(vid)
        return vid

    def row(self, coeffs: dict, sense: str, rhs, key: str, t: int | None = None) -> None:
        label = f"eq:{key}" + (f"[t={t}]" if t is not None else "")
        form = LinearForm({})
        for k, v in coeffs.items():
            if isinstance(k, str):
                form = form + LinearForm({k: v})
            else:  # a LinearForm term scaled by v
                form = form + k.scale(v)
        self.rows.append(LinearConstraint.make(form, sense, rhs, label))

    def prev(self, t: int) -> LinearForm:
        """e_{t-1} as a form: constant for t=1 with a fixed initial state."""
        if t == 1 and self.initial == "fixed":
            return LinearForm({}, self.p.initial)
        return LinearForm({name(E, t - 1): 1})

    def initial_var(self, lb=None, ub=None) -> None:
        if self.initial == "variable":
            p = self.p
            self.add_var(name(E, 0), p.E_min if lb is None else lb, p.E_max if ub is None else ub, role="e0")

    def period_vars(self, t: int, reserves: tuple = ()) -> None:
        self.add_var(name(E, t), role=E)
        self.add_var(name(PC, t), role=PC)
        self.add_var(name(PD, t), role=PD)
        for r in reserves:
            self.add_var(name(r, t), role=r)
        self.add_var(name(DELTA, t), 0, 1, BINARY, role=DELTA)

    def balance(self, t: int) -> None:
        p = self.p
        self.row({name(E, t): 1, self.prev(t): -1, name(PC, t): -p.eta_C * p.delta_t,
                  name(PD, t): p.delta_t / p.eta_D}, EQ, 0, "bso-a", t)

    def reserve_minima(self, t: int, rp: ReserveProfile | None, up: list[str], down: list[str]) -> None:
        if rp is None:
            return
        self.row({v: 1 for v in up}, GE, rp.up(t), "reserve-up-min", t)
        self.row({v: 1 for v in down}, GE, rp.down(t), "reserve-down-min", t)

    def model(self, **meta) -> ModelInstance:
        info = {"storage": self.storage, "initial": self.initial}
        info.update(meta)
        return ModelInstance(tuple(self.vars), tuple(self.rows), LinearForm(), "min", self.T, self.family, info)


def _delta_terms(t: int) -> str:
    return name(DELTA, t)


def build_bo(p: StorageParams, T: int, *, initial: str = "fixed", validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "bo", initial, validate)
    b.initial_var()
    for t in range(1, T + 1):
        b.period_vars(t)
        b.balance(t)
        b.row({name(E, t): 1}, GE, p.E_min, "bso-b", t)
        b.row({name(E, t): 1}, LE, p.E_max, "bso-b", t)
        b.row({name(PC, t): 1, name(DELTA, t): -p.P_C_max}, LE, 0, "bso-c", t)
        b.row({name(PD, t): 1, name(DELTA, t): p.P_D_max}, LE, p.P_D_max, "bso-d", t)
    return b.model()


def build_to(p: StorageParams, T: int, *, initial: str = "fixed", validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "to", initial, validate)
    b.initial_var()
    for t in range(1, T + 1):
        b.period_vars(t)
        b.balance(t)
        b.row({b.prev(t): 1, name(PD, t): -p.delta_t / p.eta_D}, GE, p.E_min, "chso-b", t)
        b.row({b.prev(t): 1, name(PC, t): p.eta_C * p.delta_t}, LE, p.E_max, "chso-a", t)
        b.row({name(PC, t): 1, name(DELTA, t): -p.P_C_max}, LE, 0, "bso-c", t)
        b.row({name(PD, t): 1, name(DELTA, t): p.P_D_max}, LE, p.P_D_max, "bso-d", t)
    return b.model()


_SPLIT = (RCUP, RCDN, RDUP, RDDN)


def _reserve_common(b: _Builder, t: int) -> None:
    b.row({name(PC, t): 1, name(RCUP, t): -1}, GE, 0, "bolr-e", t)
    b.row({name(PD, t): 1, name(RDDN, t): -1}, GE, 0, "bolr-f", t)


def build_bor(p: StorageParams, T: int, rp: ReserveProfile | None = None, *, initial: str = "fixed",
              validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "bor", initial, validate)
    b.initial_var()
    ec, ed = p.eta_C * p.delta_t, p.delta_t / p.eta_D
    for t in range(1, T + 1):
        b.period_vars(t, _SPLIT)
        b.balance(t)
        b.row({name(E, t): 1, name(RCUP, t): -ec, name(RDUP, t): -ed}, GE, p.E_min, "bolr-a", t)
        b.row({name(E, t): 1, name(RCDN, t): ec, name(RDDN, t): ed}, LE, p.E_max, "bolr-b", t)
        b.row({name(PC, t): 1, name(RCDN, t): 1, name(DELTA, t): -p.P_C_max}, LE, 0, "bolr-c", t)
        b.row({name(PD, t): 1, name(RDUP, t): 1, name(DELTA, t): p.P_D_max}, LE, p.P_D_max, "bolr-d", t)
        _reserve_common(b, t)
        b.row({name(RCDN, t): 1, name(RDDN, t): 1}, LE, p.R_down, "bolr-g", t)
        b.row({name(RCUP, t): 1, name(RDUP, t): 1}, LE, p.R_up, "bolr-h", t)
        b.reserve_minima(t, rp, [name(RCUP, t), name(RDUP, t)], [name(RCDN, t), name(RDDN, t)])
    return b.model()


def build_tor(p: StorageParams, T: int, rp: ReserveProfile | None = None, *, initial: str = "fixed",
              validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "tor", initial, validate)
    b.initial_var()
    ec, ed = p.eta_C * p.delta_t, p.delta_t / p.eta_D
    for t in range(1, T + 1):
        b.period_vars(t, _SPLIT)
        b.balance(t)
        b.row({b.prev(t): 1, name(PD, t): -ed, name(RDUP, t): -ed}, GE, p.E_min, "tolr-a", t)
        b.row({b.prev(t): 1, name(PC, t): ec, name(RCDN, t): ec}, LE, p.E_max, "tolr-b", t)
        b.row({name(PC, t): 1, name(RCDN, t): 1, name(DELTA, t): -p.P_C_max}, LE, 0, "bolr-c", t)
        b.row({name(PD, t): 1, name(RDUP, t): 1, name(DELTA, t): p.P_D_max}, LE, p.P_D_max, "bolr-d", t)
        _reserve_common(b, t)
        b.row({name(RCDN, t): 1, name(DELTA, t): -p.R_down}, LE, 0, "tolr-c", t)
        b.row({name(RDDN, t): 1, name(DELTA, t): p.R_down}, LE, p.R_down, "tolr-d", t)
        b.row({name(RCUP, t): 1, name(DELTA, t): -p.R_up}, LE, 0, "tolr-e", t)
        b.row({name(RDUP, t): 1, name(DELTA, t): p.R_up}, LE, p.R_up, "tolr-f", t)
        b.reserve_minima(t, rp, [name(RCUP, t), name(RDUP, t)], [name(RCDN, t), name(RDDN, t)])
    return b.model()


def _investment_vars(b: _Builder) -> None:
    p = b.p
    b.add_var(C_INV, role="invest")
    b.add_var(D_INV, role="invest")
    b.add_var(E_INV, role="invest")
    b.row({C_INV: 1}, LE, p.C_max, "bgiolr-i")
    b.row({D_INV: 1}, LE, p.D_max, "bgiolr-j")
    b.row({E_INV: 1}, LE, p.E_invest_max, "bgiolr-k")
    if b.initial == "variable":
        b.add_var(name(E, 0), role="e0")
        b.row({name(E, 0): 1, E_INV: -p.theta}, GE, p.theta * p.E0_installed, "initial-state")
        b.row({name(E, 0): 1, E_INV: -1}, LE, p.E0_installed, "initial-state")


def build_bir(p: StorageParams, T: int, rp: ReserveProfile | None = None, *, initial: str = "fixed",
              validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "bir", initial, validate)
    _investment_vars(b)
    ec, ed = p.eta_C * p.delta_t, p.delta_t / p.eta_D
    pc_tot, pd_tot = p.PC0_installed + p.C_max, p.PD0_installed + p.D_max
    for t in range(1, T + 1):
        b.period_vars(t, _SPLIT)
        b.balance(t)
        b.row({name(E, t): 1, E_INV: -p.theta, name(RCUP, t): -ec, name(RDUP, t): -ed}, GE,
              p.theta * p.E0_installed, "bgiolr-a", t)
        b.row({name(E, t): 1, E_INV: -1, name(RCDN, t): ec, name(RDDN, t): ed}, LE, p.E0_installed, "bgiolr-b", t)
        b.row({name(PC, t): 1, name(RCDN, t): 1, name(DELTA, t): -pc_tot}, LE, 0, "bgiolr-c", t)
        b.row({name(PC, t): 1, name(RCDN, t): 1, C_INV: -1}, LE, p.PC0_installed, "bgiolr-d", t)
        b.row({name(PD, t): 1, name(RDUP, t): 1, name(DELTA, t): pd_tot}, LE, pd_tot, "bgiolr-e", t)
        b.row({name(PD, t): 1, name(RDUP, t): 1, D_INV: -1}, LE, p.PD0_installed, "bgiolr-f", t)
        _reserve_common(b, t)
        b.reserve_minima(t, rp, [name(RCUP, t), name(RDUP, t)], [name(RCDN, t), name(RDDN, t)])
    return b.model()


def build_tir(p: StorageParams, T: int, rp: ReserveProfile | None = None, *, initial: str = "fixed",
              validate: bool = True, facets: str = "corrected") -> ModelInstance:
    """Tight investment model.

    ``facets`` selects the energy facets bounding one period of charging and
    discharging.  ``"printed"`` uses ηᶜpᶜΔ <= (1−θ)(Ē₀δ + ē) and
    (1/ηᴰ)pᴰΔ <= (1−θ)(Ē₀δ + ē) verbatim.  ``"corrected"`` (default) adds the
    reserve that moves energy in the same direction and scales the installed
    capacity by (1−δ) on the discharge side:
    ηᶜ(pᶜ + rᶜ⁻)Δ <= (1−θ)(Ē₀δ + ē) and (1/ηᴰ)(pᴰ + rᴰ⁺)Δ <= (1−θ)(Ē₀(1−δ) + ē).
    """
    if facets not in ("corrected", "printed"):
        raise ValueError("facets must be 'corrected' or 'printed'")
    b = _Builder(p, T, "tir", initial, validate)
    _investment_vars(b)
    ec, ed = p.eta_C * p.delta_t, p.delta_t / p.eta_D
    pc_tot, pd_tot = p.PC0_installed + p.C_max, p.PD0_installed + p.D_max
    keep = ONE - p.theta
    for t in range(1, T + 1):
        b.period_vars(t, _SPLIT)
        b.balance(t)
        dl = name(DELTA, t)
        pc, pd, rcdn, rdup = name(PC, t), name(PD, t), name(RCDN, t), name(RDUP, t)
        b.row({b.prev(t): 1, E_INV: -p.theta, pd: -ed, rdup: -ed}, GE, p.theta * p.E0_installed, "tgiolr-a", t)
        b.row({b.prev(t): 1, E_INV: -1, pc: ec, rcdn: ec}, LE, p.E0_installed, "tgiolr-b", t)
        b.row({pc: 1, rcdn: 1, dl: -pc_tot}, LE, 0, "bgiolr-c", t)
        b.row({pc: 1, rcdn: 1, dl: -p.PC0_installed, C_INV: -1}, LE, 0, "tgiolr-c", t)
        b.row({pd: 1, rdup: 1, dl: pd_tot}, LE, pd_tot, "bgiolr-e", t)
        b.row({pd: 1, rdup: 1, dl: p.PD0_installed, D_INV: -1}, LE, p.PD0_installed, "tgiolr-d", t)
        _reserve_common(b, t)
        if facets == "corrected":
            b.row({pc: ec, rcdn: ec, dl: -keep * p.E0_installed, E_INV: -keep}, LE, 0, "tgiolr-e", t)
            b.row({pd: ed, rdup: ed, dl: keep * p.E0_installed, E_INV: -keep}, LE, keep * p.E0_installed,
                  "tgiolr-f", t)
        else:
            b.row({pc: ec, dl: -keep * p.E0_installed, E_INV: -keep}, LE, 0, "tgiolr-e", t)
            b.row({pd: ed, dl: -keep * p.E0_installed, E_INV: -keep}, LE, 0, "tgiolr-f", t)
        b.reserve_minima(t, rp, [name(RCUP, t), rdup], [rcdn, name(RDDN, t)])
    return b.model(facets=facets)


def build_bof(p: StorageParams, T: int, rp: ReserveProfile | None = None, *, initial: str = "fixed",
              validate: bool = True) -> ModelInstance:
    b = _Builder(p, T, "bof", initial, validate)
    b.initial_var()
    ec, ed = p.eta_C * p.delta_t, p.delta_t / p.eta_D
    for t in range(1, T + 1):
        b.period_vars(t, (RUP, RDN))
        b.balance(t)
        b.row({name(E, t): 1, name(RUP, t): -ed}, GE, p.E_min, "bofr-a", t)
        b.row({name(E, t): 1, name(RDN, t): ec}, LE, p.E_max, "bofr-a", t)
        b.row({name(PC, t): 1, name(DELTA, t): -p.P_C_max}, LE, 0, "bso-c", t)
        b.row({name(PD, t): 1, name(DELTA, t): p.P_D_max}, LE, p.P_D_max, "bso-d", t)
        b.row({name(PC, t): 1, name(PD, t): -1, name(RDN, t): 1}, LE, p.P_C_max, "bofr-b", t)
        b.row({name(PC, t): -1, name(PD, t): 1, name(RUP, t): 1}, LE, p.P_D_max, "bofr-c", t)
        b.row({name(RUP, t): 1}, LE, p.R_up, "bofr-d", t)
        b.row({name(RDN, t): 1}, LE, p.R_down, "bofr-e", t)
        b.reserve_minima(t, rp, [name(RUP, t)], [name(RDN, t)])
    return b.model()


BUILDERS = {
    "bo": build_bo,
    "to": build_to,
    "bor": build_bor,
    "tor": build_tor,
    "bir": build_bir,
    "tir": build_tir,
    "bof": build_bof,
}


def build(family: str, p: StorageParams, T: int, rp: ReserveProfile | None = None, **kw) -> ModelInstance:
    family = family.lower()
    fn = BUILDERS[family]
    if family in ("bo", "to"):
        return fn(p, T, **kw)
    return fn(p, T, rp, **kw)


def storage_rows_per_period(m: ModelInstance) -> int:
    return sum(1 for r in m.constraints if r.label.endswith("[t=1]"))
