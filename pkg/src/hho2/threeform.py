"""Alternating 3-forms in homogeneous coordinates and the operator chart.

A form of dimension d is stored by its coefficients on strictly increasing
index triples (0-based internally, 1-based in JSON); the stored value is the
value of the totally skew coefficient family on that triple.  The affine chart
v^d = 1 identifies forms in dimension n+1 with pairs (T, g0): a constant fully
skew rank-3 tensor plus a constant skew matrix.  The conversion factor 3 comes
from collapsing the full-skew summation onto increasing triples.

Coefficient values are exact rationals, or polynomials in parameter symbols
for parametric families; linear maps acting on forms are always rational.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Sequence, Tuple, Union

from .linalg import PolyMatrix, poly_rank, rat_det, rat_inverse, rat_mat_mul
from .poly import MultiPoly, rat

__all__ = [
    "ThreeForm",
    "LinearMapN1",
    "pullback",
    "chart_restrict",
    "embed",
    "congruence_system",
    "CongruenceSystem",
]

Value = Union[int, Fraction, MultiPoly]

_PERM_SIGNS = {
    (0, 1, 2): 1,
    (0, 2, 1): -1,
    (1, 0, 2): -1,
    (1, 2, 0): 1,
    (2, 0, 1): 1,
    (2, 1, 0): -1,
}


def _is_zero_value(v) -> bool:
    if isinstance(v, MultiPoly):
        return v.is_zero()
    return not v


class ThreeForm:
    """Totally skew rank-3 coefficient family on indices 0..dim-1."""

    __slots__ = ("dim", "coeffs", "params")

    def __init__(self, dim: int, coeffs: Dict[Tuple[int, int, int], Value], params: Sequence[str] = ()):
        if dim < 3:
            raise ValueError("a 3-form needs dimension at least 3")
        self.dim = dim
        self.params = tuple(params)
        clean = {}
        for key, value in coeffs.items():
            i, j, k = key
            if not (0 <= i < j < k < dim):
                raise ValueError(f"triple {key} is not strictly increasing inside range")
            if isinstance(value, MultiPoly):
                if value.vars != self.params:
                    raise ValueError(f"coefficient ring {value.vars} does not match params {self.params}")
                if value.is_zero():
                    continue
                clean[(i, j, k)] = value
            else:
                v = Fraction(value)
                if v:
                    clean[(i, j, k)] = v
        self.coeffs = clean

    def value(self, i: int, j: int, k: int) -> Value:
        """Full skew family value at an arbitrary index triple."""
        if i == j or j == k or i == k:
            return Fraction(0)
        order = sorted(((i, 0), (j, 1), (k, 2)))
        key = tuple(x for x, _ in order)
        sign = _PERM_SIGNS[tuple(pos for _, pos in order)]
        base = self.coeffs.get(key)
        if base is None:
            return Fraction(0)
        return base if sign > 0 else -base

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, ThreeForm):
            return NotImplemented
        if self.dim != other.dim:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        for key in keys:
            a = self.coeffs.get(key, 0)
            b = other.coeffs.get(key, 0)
            if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
                if isinstance(a, MultiPoly) and isinstance(b, MultiPoly):
                    if a != b:
                        return False
                elif isinstance(a, MultiPoly):
                    if a != Fraction(b):
                        return False
                else:
                    if b != Fraction(a):
                        return False
            elif Fraction(a) != Fraction(b):
                return False
        return True

    __hash__ = None

    def __add__(self, other: "ThreeForm") -> "ThreeForm":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        params = self.params or other.params
        out = dict(self.coeffs)
        for key, value in other.coeffs.items():
            out[key] = out.get(key, 0) + value
        return ThreeForm(self.dim, {k: v for k, v in out.items() if not _is_zero_value(v)}, params)

    def scale(self, factor) -> "ThreeForm":
        return ThreeForm(self.dim, {k: v * factor for k, v in self.coeffs.items()}, self.params)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j, k), value in sorted(self.coeffs.items()):
            body = f"dv{i + 1}^dv{j + 1}^dv{k + 1}"
            parts.append(f"({value})*{body}")
        return " + ".join(parts)

    # ----- serialization -------------------------------------------------

    def to_json(self) -> str:
        coeffs = []
        for (i, j, k), value in sorted(self.coeffs.items()):
            if isinstance(value, MultiPoly):
                raise ValueError("parametric forms need numeric parameters before export")
            coeffs.append([i + 1, j + 1, k + 1, str(Fraction(value))])
        return json.dumps({"dim": self.dim, "coeffs": coeffs}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ThreeForm":
        data = json.loads(text)
        try:
            dim = int(data["dim"])
            raw = data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed 3-form document: missing {exc}") from None
        coeffs = {}
        for pos, item in enumerate(raw):
            if len(item) != 4:
                raise ValueError(f"coeffs[{pos}]: expected [i, j, k, value]")
            i, j, k, value = item
            if not (1 <= i < j < k <= dim):
                raise ValueError(f"coeffs[{pos}]: indices must be 1-based strictly increasing, got {item[:3]}")
            key = (i - 1, j - 1, k - 1)
            if key in coeffs:
                raise ValueError(f"coeffs[{pos}]: duplicate triple {item[:3]}")
            coeffs[key] = rat(value)
        return cls(dim, coeffs)


class LinearMapN1:
    """Invertible rational linear map of the homogeneous coordinate space."""

    __slots__ = ("dim", "entries", "det")

    def __init__(self, entries: Sequence[Sequence]):
        self.entries = [[Fraction(x) for x in row] for row in entries]
        self.dim = len(self.entries)
        if any(len(row) != self.dim for row in self.entries):
            raise ValueError("linear map matrix must be square")
        self.det = rat_det(self.entries)
        if not self.det:
            raise ValueError("linear map must be invertible")

    @property
    def is_sl(self) -> bool:
        return self.det == 1

    @classmethod
    def identity(cls, dim: int) -> "LinearMapN1":
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def random_sl(cls, dim: int, rng, shears: int = None, bound: int = 3) -> "LinearMapN1":
        """Product of random elementary shears; determinant one by construction."""
        m = [[Fraction(1 if i == j else 0) for j in range(dim)] for i in range(dim)]
        count = shears if shears is not None else 2 * dim + 2
        for _ in range(count):
            i = rng.randrange(dim)
            j = rng.randrange(dim)
            while j == i:
                j = rng.randrange(dim)
            c = Fraction(rng.randint(-bound, bound), rng.randint(1, 2))
            if not c:
                continue
            # left-multiply by E_{ij}(c): row i += c * row j
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        return cls(m)

    def inverse(self) -> "LinearMapN1":
        return LinearMapN1(rat_inverse(self.entries))

    def compose(self, other: "LinearMapN1") -> "LinearMapN1":
        """Matrix product self * other."""
        return LinearMapN1(rat_mat_mul(self.entries, other.entries))

    def __eq__(self, other):
        if not isinstance(other, LinearMapN1):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def to_json(self) -> str:
        return json.dumps(
            {"dim": self.dim, "entries": [[str(x) for x in row] for row in self.entries]},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "LinearMapN1":
        data = json.loads(text)
        try:
            entries = data["entries"]
        except (KeyError, TypeError):
            raise ValueError("malformed linear map document: missing entries") from None
        return cls([[rat(x) for x in row] for row in entries])


def _minor3(a: LinearMapN1, rows, cols) -> Fraction:
    m = a.entries
    (r0, r1, r2), (c0, c1, c2) = rows, cols
    return (
        m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1])
        - m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0])
        + m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0])
    )


def pullback(form: ThreeForm, a: LinearMapN1) -> ThreeForm:
    """Multilinear pullback: out[l,m,n] = sum omega[p,q,r] a[p][l] a[q][m] a[r][n].

    Computed triple by triple via 3x3 minors of `a`, which is the collapsed
    form of the full triple contraction over a skew family.
    """
    if a.dim != form.dim:
        raise ValueError(f"map dimension {a.dim} does not match form dimension {form.dim}")
    sources = list(form.coeffs.items())
    out = {}
    for target in combinations(range(form.dim), 3):
        total = 0
        for src, value in sources:
            minor = _minor3(a, src, target)
            if minor:
                total = total + value * minor
        if not _is_zero_value(total):
            out[target] = total
    return ThreeForm(form.dim, out, form.params)


def chart_restrict(form: ThreeForm):
    """Split a form in dimension n+1 into (T, g0) on the chart v^{n+1} = 1.

    T[i][j][k] = 3*omega[i][j][k] for i,j,k <= n and g0[i][j] = 3*omega[i][j][n+1];
    returned as (triples dict, skew matrix rows), both 0-based.
    """
    n = form.dim - 1
    t3 = {}
    g0 = [[Fraction(0)] * n for _ in range(n)]
    for (i, j, k), value in form.coeffs.items():
        if k < n:
            t3[(i, j, k)] = 3 * value
        elif j < n:
            g0[i][j] = 3 * value
            g0[j][i] = -3 * value
    return t3, g0


def embed(t3: Dict[Tuple[int, int, int], Value], g0: Sequence[Sequence], n: int, params=()) -> ThreeForm:
    """Inverse of chart_restrict: omega[ijk] = T[ijk]/3, omega[ij,n+1] = g0[ij]/3."""
    coeffs = {}
    third = Fraction(1, 3)
    for (i, j, k), value in t3.items():
        if not (0 <= i < j < k < n):
            raise ValueError(f"tensor triple {(i, j, k)} out of range for n={n}")
        coeffs[(i, j, k)] = value * third
    for i in range(n):
        for j in range(i + 1, n):
            v = g0[i][j]
            if not _is_zero_value(v):
                coeffs[(i, j, n)] = v * third
    return ThreeForm(n + 1, coeffs, params)


@dataclass
class CongruenceSystem:
    """Linear conditions cutting out the line congruence of a form.

    Row `lam` imposes sum over pairs of 2*omega[lam,mu,nu] * p[mu,nu] = 0 on
    Pluecker coordinates p (the factor 2 is the full-skew summation collapsed
    onto increasing pairs).
    """

    matrix: PolyMatrix
    pairs: List[Tuple[int, int]]

    def rank(self) -> int:
        return poly_rank(self.matrix)

    def solution_dim(self) -> int:
        return len(self.pairs) - self.rank()


def congruence_system(form: ThreeForm) -> CongruenceSystem:
    d = form.dim
    pairs = list(combinations(range(d), 2))
    variables = form.params
    rows = []
    for lam in range(d):
        row = []
        for mu, nu in pairs:
            v = form.value(lam, mu, nu)
            entry = v * 2
            if isinstance(entry, MultiPoly):
                row.append(entry)
            else:
                row.append(MultiPoly.const(variables, entry))
        rows.append(row)
    return CongruenceSystem(PolyMatrix(rows), pairs)
