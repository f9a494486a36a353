"""Linear constraints and H-represented polyhedra over named variables."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

from ..numeric import ONE, ZERO, LinearForm, Rational, format_rational, render_form, to_rational

LE = "<="
EQ = "=="
GE = ">="
_SENSE_ALIASES = {"<=": LE, "≤": LE, "=": EQ, "==": EQ, ">=": GE, "≥": GE}


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class LinearConstraint:
    """A row ``coeffs · x (<= | ==) rhs``.

    Construction normalizes: ``>=`` rows are negated, coefficients and rhs
    are scaled to coprime integers, and equality rows get a positive leading
    coefficient (in sorted variable order).  ``normalize`` also returns the
    factor applied, so ``original_row * scale == stored_row``.
    """

    coeffs: tuple  # sorted tuple of (var, Rational), integral, nonzero
    sense: str
    rhs: Rational
    label: str = ""
    # positive factor from the row as written to the stored row
    unit: Rational = field(default=ONE, compare=False, repr=False)

    @staticmethod
    def make(form: LinearForm, sense: str, rhs=0, label: str = "") -> "LinearConstraint":
        return normalize(form, sense, rhs, label)[0]

    @property
    def form(self) -> LinearForm:
        return LinearForm(dict(self.coeffs))

    def coef(self, var: str) -> Rational:
        for v, c in self.coeffs:
            if v == var:
                return c
        return ZERO

    def variables(self) -> list[str]:
        return [v for v, _ in self.coeffs]

    def lhs(self, point: Mapping[str, object]) -> Rational:
        total = ZERO
        for v, c in self.coeffs:
            total += c * to_rational(point[v])
        return total

    def violation(self, point: Mapping[str, object]) -> Rational:
        """Amount by which the point violates the row (0 when satisfied)."""
        d = self.lhs(point) - self.rhs
        if self.sense == EQ:
            return abs(d)
        return d if d > 0 else ZERO

    def source_violation(self, point: Mapping[str, object]) -> Rational:
        """Violation measured in the units of the row as originally written."""
        return self.violation(point) / self.unit

    def satisfied(self, point: Mapping[str, object]) -> bool:
        return not self.violation(point)

    def is_trivial(self) -> bool:
        return not self.coeffs

    def trivially_true(self) -> bool:
        if self.coeffs:
            return False
        return self.rhs == 0 if self.sense == EQ else self.rhs >= 0

    def relabel(self, label: str) -> "LinearConstraint":
        return LinearConstraint(self.coeffs, self.sense, self.rhs, label, self.unit)

    def negated_le(self) -> "LinearConstraint":
        """For an equality row, the ``-a·x <= -b`` half."""
        return LinearConstraint(tuple((v, -c) for v, c in self.coeffs), LE, -self.rhs, self.label, self.unit)

    def key(self, order: Mapping[str, int]) -> tuple:
        dense = [ZERO] * len(order)
        for v, c in self.coeffs:
            dense[order[v]] = c
        return (0 if self.sense == EQ else 1, tuple(dense), self.rhs)

    def render(self, order: Sequence[str] | None = None) -> str:
        sym = "=" if self.sense == EQ else "<="
        return f"{render_form(self.form, order)} {sym} {_fmt(self.rhs)}"

    def to_json(self) -> dict:
        return {
            "coeffs": {v: format_rational(c) for v, c in self.coeffs},
            "sense": self.sense,
            "rhs": format_rational(self.rhs),
            "label": self.label,
        }

    @staticmethod
    def from_json(doc: Mapping) -> "LinearConstraint":
        form = LinearForm({v: to_rational(c) for v, c in doc["coeffs"].items()})
        return LinearConstraint.make(form, doc["sense"], to_rational(doc["rhs"]), doc.get("label", ""))


def _fmt(q: Rational) -> str:
    return str(int(q.numerator)) if q.denominator == 1 else f"{int(q.numerator)}/{int(q.denominator)}"


def normalize(form: LinearForm, sense: str, rhs=0, label: str = "") -> tuple[LinearConstraint, Rational]:
    """Normalize ``form sense rhs`` and return the row with its scale factor."""
    try:
        sense = _SENSE_ALIASES[sense]
    except KeyError:
        raise ValueError(f"unknown sense {sense!r}") from None
    rhs = to_rational(rhs) - form.constant
    items = sorted(form.items())
    scale = ONE
    if sense == GE:
        items = [(v, -c) for v, c in items]
        rhs = -rhs
        scale = -ONE
        sense = LE
    values = [c for _, c in items] + ([rhs] if rhs else [])
    if values:
        den = 1
        for q in values:
            den = _lcm(den, int(q.denominator))
        num = 0
        for q in values:
            num = gcd(num, int(q.numerator) * (den // int(q.denominator)))
        factor = to_rational(den) / num
        if sense == EQ and items and items[0][1] < 0:
            factor = -factor
        if not items and rhs:
            # constant rows keep their sign information: 0 <= 1 or 0 <= -1
            factor = to_rational(den) / num
        items = [(v, c * factor) for v, c in items]
        rhs = rhs * factor
        scale = scale * factor
    return LinearConstraint(tuple(items), sense, rhs, label, abs(scale)), scale


def le(form: LinearForm, rhs=0, label: str = "") -> LinearConstraint:
    return LinearConstraint.make(form, LE, rhs, label)


def ge(form: LinearForm, rhs=0, label: str = "") -> LinearConstraint:
    return LinearConstraint.make(form, GE, rhs, label)


def eq(form: LinearForm, rhs=0, label: str = "") -> LinearConstraint:
    return LinearConstraint.make(form, EQ, rhs, label)


@dataclass(frozen=True)
class Polyhedron:
    """Immutable H-representation ``{x : rows}`` over ordered named variables."""

    variables: tuple
    constraints: tuple = field(default=())

    def __init__(self, variables: Iterable[str], constraints: Iterable[LinearConstraint] = (), *, canonical: bool = True):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable ids")
        known = set(variables)
        rows = []
        for row in constraints:
            missing = [v for v in row.variables() if v not in known]
            if missing:
                raise ValueError(f"row {row.label!r} references undeclared variables {missing}")
            rows.append(row)
        if canonical:
            rows = canonical_rows(variables, rows)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "constraints", tuple(rows))

    @property
    def dim(self) -> int:
        return len(self.variables)

    def __len__(self) -> int:
        return len(self.constraints)

    def contains(self, point: Mapping[str, object]) -> bool:
        return all(r.satisfied(point) for r in self.constraints)

    def violations(self, point: Mapping[str, object]) -> list[tuple[LinearConstraint, Rational]]:
        out = []
        for r in self.constraints:
            v = r.violation(point)
            if v:
                out.append((r, v))
        return out

    def inequalities(self) -> list[LinearConstraint]:
        return [r for r in self.constraints if r.sense == LE]

    def equalities(self) -> list[LinearConstraint]:
        return [r for r in self.constraints if r.sense == EQ]

    def with_rows(self, rows: Iterable[LinearConstraint]) -> "Polyhedron":
        return Polyhedron(self.variables, list(self.constraints) + list(rows))

    def matrix(self):
        """Dense ``(A, b, senses)`` in variable order."""
        idx = {v: i for i, v in enumerate(self.variables)}
        A, b, senses = [], [], []
        for r in self.constraints:
            row = [ZERO] * len(self.variables)
            for v, c in r.coeffs:
                row[idx[v]] = c
            A.append(row)
            b.append(r.rhs)
            senses.append(r.sense)
        return A, b, senses

    def point(self, values: Sequence) -> dict:
        return {v: to_rational(x) for v, x in zip(self.variables, values)}

    def to_json(self) -> dict:
        return {"variables": list(self.variables), "constraints": [r.to_json() for r in self.constraints]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @staticmethod
    def from_json(doc: Mapping) -> "Polyhedron":
        return Polyhedron(doc["variables"], [LinearConstraint.from_json(c) for c in doc["constraints"]])

    def render(self) -> str:
        return "\n".join(f"{r.render(self.variables)}    [{r.label}]" for r in self.constraints)

    # exact LP-backed queries
    def is_empty(self) -> bool:
        from .lp import feasible_point

        return feasible_point(self) is None

    def is_bounded(self) -> bool:
        from .lp import is_bounded

        return is_bounded(self)


def canonical_rows(variables: Sequence[str], rows: Iterable[LinearConstraint]) -> list[LinearConstraint]:
    """Sort rows canonically and drop exact duplicates (first label wins)."""
    order = {v: i for i, v in enumerate(variables)}
    seen = {}
    for r in rows:
        k = r.key(order)
        if k not in seen:
            seen[k] = r
    return [seen[k] for k in sorted(seen)]
