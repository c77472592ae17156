"""Exact linear algebra over polynomial rings and over the rationals.

Polynomial matrices get fraction-free algorithms: Bareiss elimination for
determinants and rank, a recursive first-row Pfaffian with memoisation over
index subsets, and a skew inverse assembled from Pfaffian minors so each
entry's denominator divides the Pfaffian.  Plain rational matrices (lists of
lists of Fraction) get ordinary Gaussian elimination helpers.

Sign conventions are pinned by the small cases: Pf([[0,1],[-1,0]]) = +1 and
the 4x4 Pfaffian is m01*m23 - m02*m13 + m03*m12.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .poly import MultiPoly, RationalFn

__all__ = [
    "PolyMatrix",
    "det_bareiss",
    "det_minor_expansion",
    "pfaffian",
    "pfaffian_adjugate",
    "inverse_skew",
    "poly_rank",
    "rat_mat_mul",
    "rat_identity",
    "rat_det",
    "rat_inverse",
    "rat_rank",
    "rat_kernel",
]


class PolyMatrix:
    """Rectangular matrix of MultiPoly entries sharing one ring."""

    __slots__ = ("rows", "cols", "entries", "vars")

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged matrix")
        vs = None
        for row in self.entries:
            for p in row:
                if not isinstance(p, MultiPoly):
                    raise TypeError(f"entry {p!r} is not a MultiPoly")
                if vs is None:
                    vs = p.vars
                elif p.vars != vs:
                    raise ValueError("mixed variable sets in matrix")
        self.vars = vs if vs is not None else ()

    @classmethod
    def from_scalars(cls, variables, rows) -> "PolyMatrix":
        lift = lambda v: v if isinstance(v, MultiPoly) else MultiPoly.const(variables, v)
        return cls([[lift(v) for v in row] for row in rows])

    @classmethod
    def identity(cls, variables, n: int) -> "PolyMatrix":
        one = MultiPoly.const(variables, 1)
        zero = MultiPoly.zero(variables)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, variables, rows: int, cols: int) -> "PolyMatrix":
        zero = MultiPoly.zero(variables)
        return cls([[zero for _ in range(cols)] for _ in range(rows)])

    def at(self, i: int, j: int) -> MultiPoly:
        return self.entries[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_skew(self) -> bool:
        if not self.is_square():
            return False
        for i in range(self.rows):
            if not self.entries[i][i].is_zero():
                return False
            for j in range(i + 1, self.cols):
                if self.entries[i][j] != -self.entries[j][i]:
                    return False
        return True

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [[self.entries[i][j] - other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def scale(self, factor) -> "PolyMatrix":
        return PolyMatrix([[e * factor for e in row] for row in self.entries])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = MultiPoly.zero(self.vars)
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    __hash__ = None

    def eval_at(self, point) -> List[List[Fraction]]:
        return [[p.eval(point) for p in row] for row in self.entries]

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(str(p) for p in row) + "]" for row in self.entries) + "]"


def det_bareiss(matrix: PolyMatrix) -> MultiPoly:
    """Exact determinant by fraction-free Bareiss elimination.

    Intermediate entries are leading minors of the input, so every division
    below is exact in the polynomial ring.
    """
    if not matrix.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    if n == 0:
        return MultiPoly.const(matrix.vars, 1)
    m = [row[:] for row in matrix.entries]
    sign = 1
    prev = MultiPoly.const(matrix.vars, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot_row = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if pivot_row is None:
                return MultiPoly.zero(matrix.vars)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = MultiPoly.zero(matrix.vars)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def det_minor_expansion(matrix: PolyMatrix) -> MultiPoly:
    """Division-free determinant via dynamic programming over row subsets.

    Processes columns left to right, keeping minors of all row subsets of the
    processed prefix.  Often faster than elimination for small symbolic
    matrices because no exact divisions are performed.
    """
    if not matrix.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = matrix.rows
    if n == 0:
        return MultiPoly.const(matrix.vars, 1)
    m = matrix.entries
    minors = {0: MultiPoly.const(matrix.vars, 1)}
    for col in range(n):
        nxt: dict = {}
        col_parity = col & 1
        for mask, minor in minors.items():
            if minor.is_zero():
                continue
            parity = 0
            for r in range(n):
                bit = 1 << r
                if mask & bit:
                    parity ^= 1
                    continue
                entry = m[r][col]
                if entry.terms:
                    term = minor * entry
                    if parity ^ col_parity:
                        term = -term
                    key = mask | bit
                    if key in nxt:
                        nxt[key] = nxt[key] + term
                    else:
                        nxt[key] = term
        minors = nxt
    full = (1 << n) - 1
    return minors.get(full, MultiPoly.zero(matrix.vars))


def _pfaffian_minors(matrix: PolyMatrix, masks):
    """Pfaffians of the skew submatrices indexed by the given bitmasks,
    computed by recursive first-row expansion with shared memoisation."""
    m = matrix.entries
    vars_ = matrix.vars
    one = MultiPoly.const(vars_, 1)
    zero = MultiPoly.zero(vars_)
    memo = {0: one}

    def pf(mask: int) -> MultiPoly:
        got = memo.get(mask)
        if got is not None:
            return got
        idx = [i for i in range(matrix.rows) if mask & (1 << i)]
        first = idx[0]
        total = zero
        sign = 1
        for j in idx[1:]:
            entry = m[first][j]
            if entry.terms:
                sub = pf(mask & ~(1 << first) & ~(1 << j))
                if sub.terms:
                    term = entry * sub
                    total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[mask] = total
        return total

    return [pf(mask) for mask in masks]


def pfaffian(matrix: PolyMatrix) -> MultiPoly:
    """Pfaffian of an even-dimensional skew matrix; Pf^2 = det."""
    if not matrix.is_square():
        raise ValueError("pfaffian of a non-square matrix")
    if matrix.rows % 2 != 0:
        raise ValueError("pfaffian needs even dimension")
    if not matrix.is_skew():
        raise ValueError("pfaffian of a non-skew matrix")
    full = (1 << matrix.rows) - 1
    return _pfaffian_minors(matrix, [full])[0]


def pfaffian_adjugate(matrix: PolyMatrix):
    """(P, pf) with matrix^{-1} = P / pf for an invertible skew matrix.

    P[i][j] is, up to the sign (-1)^(i+j) * sgn(j-i), the Pfaffian of the
    submatrix with rows and columns i, j deleted; all entries are polynomials.
    """
    if not matrix.is_square() or matrix.rows % 2 != 0 or not matrix.is_skew():
        raise ValueError("pfaffian adjugate needs an even-dimensional skew matrix")
    n = matrix.rows
    full = (1 << n) - 1
    masks = [full]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for i, j in pairs:
        masks.append(full & ~(1 << i) & ~(1 << j))
    values = _pfaffian_minors(matrix, masks)
    pf = values[0]
    if pf.is_zero():
        raise ZeroDivisionError("matrix is degenerate (zero Pfaffian)")
    zero = MultiPoly.zero(matrix.vars)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for (i, j), minor in zip(pairs, values[1:]):
        s = -1 if (i + j) % 2 else 1
        entry = minor if s > 0 else -minor
        out[i][j] = entry
        out[j][i] = -entry
    return PolyMatrix(out), pf


def inverse_skew(matrix: PolyMatrix) -> List[List[RationalFn]]:
    """Exact inverse of a nondegenerate skew matrix as reduced fractions.

    Each reduced denominator divides the Pfaffian and numerator degrees stay
    one step below it, which is what makes flux denominators Pfaffians.
    """
    adj, pf = pfaffian_adjugate(matrix)
    return [[RationalFn(entry, pf) for entry in row] for row in adj.entries]


def poly_rank(matrix: PolyMatrix) -> int:
    """Rank over the fraction field of the polynomial ring (exact)."""
    m = [row[:] for row in matrix.entries]
    rows, cols = matrix.rows, matrix.cols
    rank = 0
    prev = MultiPoly.const(matrix.vars, 1)
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if not m[i][col].is_zero()), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, rows):
            for j in range(col + 1, cols):
                num = p * m[i][j] - m[i][col] * m[rank][j]
                m[i][j] = num.exact_div(prev)
            m[i][col] = MultiPoly.zero(matrix.vars)
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank


# ----- rational (constant) matrices ------------------------------------------


def rat_mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    return [
        [sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
        for i in range(rows)
    ]


def rat_identity(n: int):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def _rat_echelon(matrix):
    """Row-reduce a copy; returns (echelon rows, pivot columns, det factor).

    det factor is the product of pivots with swap signs folded in, i.e. the
    determinant when the matrix is square and full-rank.
    """
    m = [[Fraction(x) for x in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    det = Fraction(1)
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            det = -det
        det *= m[r][c]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots, det


def rat_det(matrix) -> Fraction:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    _, pivots, det = _rat_echelon(matrix)
    return det if len(pivots) == n else Fraction(0)


def rat_rank(matrix) -> int:
    if not matrix:
        return 0
    _, pivots, _ = _rat_echelon(matrix)
    return len(pivots)


def rat_inverse(matrix):
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(matrix)]
    m, pivots, _ = _rat_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m[:n]]


def rat_kernel(matrix):
    """Basis of the right kernel as a list of Fraction vectors."""
    if not matrix:
        return []
    cols = len(matrix[0])
    m, pivots, _ = _rat_echelon(matrix)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis
