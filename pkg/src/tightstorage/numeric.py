"""Exact rational scalars and sparse linear forms.

Every polyhedral computation in the package runs on :class:`Rational`
values (``gmpy2.mpq``), which are always stored reduced with a positive
denominator.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

from gmpy2 import mpq

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


class ZeroDenominator(ZeroDivisionError):
    """Raised when a rational is built with denominator zero."""


def rational_reduce(n: int, d: int) -> Rational:
    if d == 0:
        raise ZeroDenominator(f"zero denominator in {n}/{d}")
    return mpq(int(n), int(d))


def to_rational(value) -> Rational:
    """Coerce ints, strings ("3/4", "0.9", "-2"), Fractions and floats.

    Floats go through their shortest decimal repr, so ``0.9`` becomes 9/10
    rather than the binary expansion.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite float {value!r}")
        return _from_text(repr(value))
    if isinstance(value, str):
        return _from_text(value)
    if isinstance(value, _RationalABC):
        return rational_reduce(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {value!r} to Rational")


def _from_text(text: str) -> Rational:
    text = text.strip()
    if "/" in text:
        n, d = text.split("/", 1)
        return rational_reduce(int(n), int(d))
    f = Fraction(text)
    return mpq(f.numerator, f.denominator)


def format_rational(q) -> str:
    """Serialize as ``"n/d"`` (reduced, sign on the numerator)."""
    q = to_rational(q)
    return f"{int(q.numerator)}/{int(q.denominator)}"


def format_decimal(q, places: int = 1) -> str:
    """Round half away from zero to ``places`` decimals, exactly."""
    q = to_rational(q)
    scale = 10**places
    scaled = q * scale
    sign = -1 if scaled < 0 else 1
    a = abs(scaled)
    whole = int(a.numerator // a.denominator)
    if (a - whole) * 2 >= 1:
        whole += 1
    whole *= sign
    if places == 0:
        return str(whole)
    s = f"{abs(whole):0{places + 1}d}"
    out = f"{s[:-places]}.{s[-places:]}"
    return f"-{out}" if whole < 0 else out


class LinearForm:
    """Immutable sparse affine form ``sum(c_v * v) + constant``.

    Zero coefficients are never stored.
    """

    __slots__ = ("_coeffs", "_const", "_hash")

    def __init__(self, coeffs: Mapping[str, object] | Iterable[tuple[str, object]] = (), constant=0):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, Rational] = {}
        for var, c in items:
            c = to_rational(c)
            if c:
                total = acc.get(var, ZERO) + c
                if total:
                    acc[var] = total
                else:
                    acc.pop(var, None)
        self._coeffs = acc
        self._const = to_rational(constant)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict, const) -> "LinearForm":
        obj = cls.__new__(cls)
        obj._coeffs = coeffs
        obj._const = const
        obj._hash = None
        return obj

    @classmethod
    def var(cls, name: str, coef=1) -> "LinearForm":
        return cls({name: coef})

    @property
    def coeffs(self) -> dict[str, Rational]:
        return dict(self._coeffs)

    @property
    def constant(self) -> Rational:
        return self._const

    def coef(self, var: str) -> Rational:
        return self._coeffs.get(var, ZERO)

    def variables(self) -> list[str]:
        return sorted(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def is_constant(self) -> bool:
        return not self._coeffs

    def evaluate(self, point: Mapping[str, object]) -> Rational:
        total = self._const
        for v, c in self._coeffs.items():
            total += c * to_rational(point[v])
        return total

    def scale(self, alpha) -> "LinearForm":
        alpha = to_rational(alpha)
        if not alpha:
            return LinearForm()
        return LinearForm._raw({v: c * alpha for v, c in self._coeffs.items()}, self._const * alpha)

    def substitute(self, var: str, replacement: "LinearForm") -> "LinearForm":
        c = self._coeffs.get(var)
        if c is None:
            return self
        rest = LinearForm._raw({v: k for v, k in self._coeffs.items() if v != var}, self._const)
        return combine(rest, ONE, replacement, c)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return combine(self, ONE, other, ONE)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return combine(self, ONE, other, -ONE)

    def __neg__(self) -> "LinearForm":
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self._const == other._const and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._coeffs.items()), self._const))
        return self._hash

    def __repr__(self) -> str:
        return f"LinearForm({render_form(self)})"


def combine(a: LinearForm, alpha, b: LinearForm, beta) -> LinearForm:
    """Return ``alpha*a + beta*b`` with zero coefficients pruned."""
    alpha = to_rational(alpha)
    beta = to_rational(beta)
    out: dict[str, Rational] = {}
    if alpha:
        for v, c in a._coeffs.items():
            out[v] = c * alpha
    if beta:
        for v, c in b._coeffs.items():
            t = out.get(v, ZERO) + c * beta
            if t:
                out[v] = t
            else:
                out.pop(v, None)
    return LinearForm._raw(out, a._const * alpha + b._const * beta)


def linform_combine(a: LinearForm, alpha, b: LinearForm, beta) -> LinearForm:
    return combine(a, alpha, b, beta)


def render_form(form: LinearForm, order: Iterable[str] | None = None) -> str:
    names = list(order) if order is not None else form.variables()
    parts = []
    for v in names:
        c = form.coef(v)
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_short(mag)}*{v}"
        parts.append((sign, body))
    if form.constant or not parts:
        c = form.constant
        parts.append(("-" if c < 0 else "+", _short(abs(c))))
    head_sign, head = parts[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _short(q) -> str:
    q = to_rational(q)
    return str(int(q.numerator)) if q.denominator == 1 else f"{int(q.numerator)}/{int(q.denominator)}"
