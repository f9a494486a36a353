"""Exact two-phase primal simplex on ``min c·x  s.t.  A x = b, x >= 0``.

Dense tableau over gmpy2 rationals.  Bland's rule is the default pivot
rule; ``"dantzig"`` picks the most negative reduced cost and falls back to
Bland after a run of degenerate pivots, so it terminates as well.

Every result carries a certificate that is re-checked before returning:
duals ``y`` with ``c - yA >= 0`` and ``c·x == y·b`` on optimality, a Farkas
vector ``y`` with ``yA <= 0`` and ``y·b > 0`` on infeasibility, or a ray
``r >= 0`` with ``A r == 0`` and ``c·r < 0`` on unboundedness.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..numeric import ONE, ZERO, Rational

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

_DEGENERATE_SWITCH = 50


class CertificateError(AssertionError):
    """An LP certificate failed its exact re-check (indicates a bug)."""


@dataclass
class StandardResult:
    status: str
    x: list = field(default_factory=list)
    objective: Rational | None = None
    y: list | None = None  # duals on optimality, Farkas vector on infeasibility
    ray: list | None = None
    pivots: int = 0


def solve_standard(A: Sequence[Sequence[Rational]], b: Sequence[Rational], c: Sequence[Rational],
                   rule: str = "bland", check: bool = True) -> StandardResult:
    m = len(A)
    n = len(c)
    sign = [ONE] * m
    rows = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            sign[i] = -ONE
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [rhs])

    # reuse identity columns already present (slacks) as the starting basis
    basis = [-1] * m
    col_rows: dict[int, int] = {}
    for j in range(n):
        hit = -1
        ok = True
        for i in range(m):
            v = rows[i][j]
            if v:
                if v == 1 and hit < 0:
                    hit = i
                else:
                    ok = False
                    break
        if ok and hit >= 0 and basis[hit] < 0:
            basis[hit] = j
            col_rows[j] = hit
    art_rows = [i for i in range(m) if basis[i] < 0]
    n_art = len(art_rows)
    total = n + n_art
    for i in range(m):
        row = rows[i]
        rhs = row.pop()
        row.extend([ZERO] * n_art)
        row.append(rhs)
    init_col = list(basis)
    for k, i in enumerate(art_rows):
        rows[i][n + k] = ONE
        basis[i] = n + k
        init_col[i] = n + k

    pivots = 0

    def pivot(d: list, r: int, j: int) -> None:
        nonlocal pivots
        pivots += 1
        prow = rows[r]
        p = prow[j]
        if p != 1:
            inv = ONE / p
            prow = [v * inv if v else v for v in prow]
            rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(m):
            if i != r:
                row = rows[i]
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        f = d[j]
        if f:
            for k in nz:
                d[k] -= f * prow[k]
        basis[r] = j

    def run(d: list, allowed: int) -> int:
        """Iterate to optimality; returns an unbounded column or -1."""
        degenerate = 0
        while True:
            j = -1
            if rule == "dantzig" and degenerate < _DEGENERATE_SWITCH:
                best = ZERO
                for k in range(allowed):
                    if d[k] < best:
                        best = d[k]
                        j = k
            else:
                for k in range(allowed):
                    if d[k] < 0:
                        j = k
                        break
            if j < 0:
                return -1
            r = -1
            best_ratio = None
            for i in range(m):
                a = rows[i][j]
                if a > 0:
                    ratio = rows[i][-1] / a
                    if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and basis[i] < basis[r]):
                        best_ratio = ratio
                        r = i
            if r < 0:
                return j
            degenerate = degenerate + 1 if best_ratio == 0 else 0
            pivot(d, r, j)

    # phase 1
    if n_art:
        d1 = [ZERO] * (total + 1)
        for i in art_rows:
            row = rows[i]
            for k in range(n):
                if row[k]:
                    d1[k] -= row[k]
            d1[-1] -= row[-1]
        run(d1, n)
        w = -d1[-1]
        if w > 0:
            y = []
            for i in range(m):
                j = init_col[i]
                cost = ONE if j >= n else ZERO
                y.append((cost - d1[j]) * sign[i])
            res = StandardResult(INFEASIBLE, y=y, pivots=pivots)
            if check:
                _check_farkas(A, b, y)
            return res
        # drive remaining artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n:
                row = rows[i]
                for j in range(n):
                    if row[j]:
                        pivot(d1, i, j)
                        break

    # phase 2
    d = [ZERO] * (total + 1)
    for j in range(n):
        d[j] = c[j]
    for i in range(m):
        cb = c[basis[i]] if basis[i] < n else ZERO
        if cb:
            row = rows[i]
            for k, v in enumerate(row):
                if v:
                    d[k] -= cb * v
    col = run(d, n)
    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rows[i][-1]
    if col >= 0:
        ray = [ZERO] * n
        ray[col] = ONE
        for i in range(m):
            if basis[i] < n:
                ray[basis[i]] = -rows[i][col]
        res = StandardResult(UNBOUNDED, x=x, ray=ray, pivots=pivots)
        if check:
            _check_ray(A, c, ray)
        return res
    y = []
    for i in range(m):
        j = init_col[i]
        cost = c[j] if j < n else ZERO
        y.append((cost - d[j]) * sign[i])
    obj = sum((c[j] * x[j] for j in range(n) if x[j]), ZERO)
    res = StandardResult(OPTIMAL, x=x, objective=obj, y=y, pivots=pivots)
    if check:
        _check_optimal(A, b, c, x, y, obj)
    return res


def _check_optimal(A, b, c, x, y, obj) -> None:
    m, n = len(A), len(c)
    for i in range(m):
        s = ZERO
        row = A[i]
        for j in range(n):
            if row[j] and x[j]:
                s += row[j] * x[j]
        if s != b[i]:
            raise CertificateError(f"primal row {i} not satisfied")
    if any(v < 0 for v in x):
        raise CertificateError("negative primal value")
    for j in range(n):
        red = c[j]
        for i in range(m):
            if A[i][j] and y[i]:
                red -= y[i] * A[i][j]
        if red < 0:
            raise CertificateError(f"reduced cost of column {j} is negative")
    dual = sum((y[i] * b[i] for i in range(m) if y[i]), ZERO)
    if dual != obj:
        raise CertificateError("strong duality gap")


def _check_farkas(A, b, y) -> None:
    n = len(A[0]) if A else 0
    for j in range(n):
        s = ZERO
        for i in range(len(A)):
            if A[i][j] and y[i]:
                s += y[i] * A[i][j]
        if s > 0:
            raise CertificateError("Farkas vector has yA > 0")
    if sum((y[i] * b[i] for i in range(len(b))), ZERO) <= 0:
        raise CertificateError("Farkas vector has y·b <= 0")


def _check_ray(A, c, ray) -> None:
    if any(v < 0 for v in ray):
        raise CertificateError("negative ray entry")
    for row in A:
        if sum((row[j] * ray[j] for j in range(len(ray)) if ray[j] and row[j]), ZERO) != 0:
            raise CertificateError("ray leaves the equality system")
    if sum((c[j] * ray[j] for j in range(len(ray)) if ray[j]), ZERO) >= 0:
        raise CertificateError("ray does not improve the objective")
