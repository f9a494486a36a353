"""Vertex enumeration and convex hulls by the double description method.

Works in integer arithmetic on the homogenized cone.  Adjacency of rays is
decided combinatorially with zero-set bitmasks.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from ..errors import TooLarge, Unbounded
from ..numeric import ZERO, Rational, to_rational
from .constraint import EQ, LinearConstraint, Polyhedron
from .lp import feasible_point

MAX_DIM = 12
MAX_ROWS = 60


@dataclass(frozen=True)
class VertexSet:
    variables: tuple
    points: tuple  # tuples of Rational in variable order, sorted

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_dicts(self) -> list[dict]:
        return [dict(zip(self.variables, pt)) for pt in self.points]

    def to_json(self) -> dict:
        from ..numeric import format_rational

        return {"variables": list(self.variables),
                "points": [[format_rational(x) for x in pt] for pt in self.points]}


def _primitive(vec: list[int]) -> tuple:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        vec = [x // g for x in vec]
    return tuple(vec)


def _int_row(values: Sequence[Rational]) -> list[int]:
    den = 1
    for q in values:
        d = int(to_rational(q).denominator)
        den = den // gcd(den, d) * d
    return [int(to_rational(q) * den) for q in values]


def _rank_select(rows: Sequence[Sequence[int]], d: int) -> list[int]:
    """Indices of a maximal linearly independent subset (greedy, in order)."""
    basis: list[tuple[int, list[Rational]]] = []  # (pivot col, reduced row)
    chosen = []
    for k, row in enumerate(rows):
        v = [to_rational(x) for x in row]
        for col, b in basis:
            if v[col]:
                f = v[col] / b[col]
                v = [x - f * y for x, y in zip(v, b)]
        piv = next((j for j in range(d) if v[j]), None)
        if piv is not None:
            basis.append((piv, v))
            chosen.append(k)
            if len(chosen) == d:
                break
    return chosen


def _inverse(M: list[list[int]]) -> list[list[Rational]]:
    n = len(M)
    A = [[to_rational(x) for x in row] + [to_rational(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def dd_extreme_rays(G: Sequence[Sequence[int]]) -> list[tuple]:
    """Extreme rays of the pointed cone ``{y : G y >= 0}``.

    ``G`` must have full column rank; rays are primitive integer vectors in a
    deterministic order.
    """
    if not G:
        raise ValueError("empty constraint matrix")
    d = len(G[0])
    order = _rank_select(G, d)
    if len(order) < d:
        raise Unbounded("cone has a lineality space")
    inv = _inverse([list(G[k]) for k in order])
    rays = []
    for j in range(d):
        col = [inv[i][j] for i in range(d)]
        rays.append(_primitive(_int_row(col)))
    # zero sets over processed rows, as bitmasks indexed by position in G
    zero = []
    for j in range(d):
        mask = 0
        for i, k in enumerate(order):
            if i != j:
                mask |= 1 << k
        zero.append(mask)
    remaining = [k for k in range(len(G)) if k not in set(order)]
    for k in remaining:
        g = G[k]
        vals = [sum(a * b for a, b in zip(g, r)) for r in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        zer = [i for i, s in enumerate(vals) if s == 0]
        bit = 1 << k
        new_rays = []
        new_zero = []
        if pos and neg:
            need = d - 2
            for p in pos:
                zp = zero[p]
                for q in neg:
                    common = zp & zero[q]
                    if common.bit_count() < need:
                        continue
                    adjacent = True
                    for r in range(len(rays)):
                        if r != p and r != q and common & ~zero[r] == 0:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    sp, sq = vals[p], vals[q]
                    ray = [sp * a - sq * b for a, b in zip(rays[q], rays[p])]
                    new_rays.append(_primitive(ray))
                    new_zero.append(common | bit)
        rays = [rays[i] for i in pos] + [rays[i] for i in zer] + new_rays
        zero = [zero[i] for i in pos] + [zero[i] | bit for i in zer] + new_zero
    return sorted(set(rays))


def _homogenized(p: Polyhedron) -> list[list[int]]:
    n = p.dim
    idx = {v: i for i, v in enumerate(p.variables)}
    G = []
    for r in p.constraints:
        row = [0] * (n + 1)
        for v, c in r.coeffs:
            row[idx[v]] = -c
        row[n] = r.rhs
        row = _int_row(row)
        G.append(row)
        if r.sense == EQ:
            G.append([-x for x in row])
    G.append([0] * n + [1])
    return G


def enumerate_vertices(p: Polyhedron, max_dim: int = MAX_DIM, max_rows: int = MAX_ROWS) -> VertexSet:
    """All vertices of a bounded polyhedron, exact and deduplicated."""
    if p.dim > max_dim or len(p.constraints) > max_rows:
        raise TooLarge(f"vertex enumeration guard: dim {p.dim} (max {max_dim}), rows {len(p.constraints)} (max {max_rows})")
    if feasible_point(p) is None:
        return VertexSet(p.variables, ())
    n = p.dim
    if n == 0:
        return VertexSet(p.variables, ((),))
    rays = dd_extreme_rays(_homogenized(p))
    pts = set()
    for r in rays:
        t = r[n]
        if t == 0:
            raise Unbounded("polyhedron has a recession direction")
        pts.add(tuple(to_rational(x) / t for x in r[:n]))
    return VertexSet(p.variables, tuple(sorted(pts)))


def _nullspace(rows: list[list[Rational]], n: int) -> tuple[list[list[Rational]], list[int]]:
    """Basis of ``{a : row·a = 0 for all rows}`` plus the pivot columns."""
    A = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [ZERO] * n
        vec[fcol] = to_rational(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -A[i][fcol]
        basis.append(vec)
    return basis, pivots


def hull_of_points(points: Iterable[Sequence], variables: Sequence[str], label: str = "hull") -> Polyhedron:
    """H-representation of the convex hull of finitely many points."""
    pts = sorted({tuple(to_rational(x) for x in pt) for pt in points})
    n = len(variables)
    if not pts:
        return Polyhedron(variables, [LinearConstraint((), "<=", to_rational(-1), f"{label}:empty")])
    v0 = pts[0]
    diffs = [[a - b for a, b in zip(pt, v0)] for pt in pts[1:]]
    normals, pivots = _nullspace(diffs, n) if diffs else ([[to_rational(int(i == j)) for j in range(n)] for i in range(n)], [])
    rows = []
    for k, a in enumerate(normals):
        ai = _int_row(a)
        coeffs = {variables[j]: to_rational(ai[j]) for j in range(n) if ai[j]}
        rhs = sum((to_rational(ai[j]) * v0[j] for j in range(n)), ZERO)
        rows.append(_row(coeffs, EQ, rhs, f"{label}:aff{k}"))
    k = len(pivots)
    if k == 0:
        return Polyhedron(variables, rows)
    # facets of the full-dimensional projection onto the pivot coordinates
    proj = [[pt[c] for c in pivots] for pt in pts]
    G = [_int_row(w + [to_rational(1)]) for w in proj]
    if k == 1:
        lo = min(w[0] for w in proj)
        hi = max(w[0] for w in proj)
        v = variables[pivots[0]]
        rows.append(_row({v: to_rational(1)}, "<=", hi, f"{label}:f0"))
        rows.append(_row({v: to_rational(-1)}, "<=", -lo, f"{label}:f1"))
        return Polyhedron(variables, rows)
    rays = dd_extreme_rays(G)
    idx = 0
    for ray in rays:
        a = ray[:k]
        c = ray[k]
        if not any(a):
            continue
        coeffs = {variables[pivots[j]]: to_rational(-a[j]) for j in range(k) if a[j]}
        rows.append(_row(coeffs, "<=", to_rational(c), f"{label}:f{idx}"))
        idx += 1
    return Polyhedron(variables, rows)


def _row(coeffs: dict, sense: str, rhs, label: str) -> LinearConstraint:
    from ..numeric import LinearForm

    return LinearConstraint.make(LinearForm(coeffs), sense, rhs, label)
