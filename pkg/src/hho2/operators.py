"""Second-order homogeneous Hamiltonian operators and projective reciprocals.

An operator is determined by a constant fully skew rank-3 tensor T and a
constant skew matrix g0 on n dependent variables (n even): its covariant
metric is g_ij(u) = T_ijk u^k + g0_ij, summed over the full skew range.  The
operator is nondegenerate when the Pfaffian of g is not the zero polynomial;
degenerate operators are representable and flagged, but excluded from
inversion-dependent work.

Projective reciprocal transformations act through an invertible matrix on the
n+2 homogeneous coordinates of the extended tensor; the induced point map and
its Jacobian live on the affine chart.  `transform` pulls the extended tensor
back along the inverse matrix, which makes `conformal_check` the literal
conformal identity J^T gt(ut) J = A(u)^{-3} g(u).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from .linalg import PolyMatrix, pfaffian, rat_det
from .poly import MultiPoly, rat
from .threeform import LinearMapN1, ThreeForm, pullback

__all__ = [
    "Hho2",
    "ProjReciprocal",
    "ValidationReport",
    "validate",
    "extend_tensor",
    "transform",
    "conformal_check",
]

Value = Union[int, Fraction, MultiPoly]

_SKEW3_SIGNS = {
    (0, 1, 2): 1,
    (0, 2, 1): -1,
    (1, 0, 2): -1,
    (1, 2, 0): 1,
    (2, 0, 1): 1,
    (2, 1, 0): -1,
}


def _lift(value: Value, variables: Tuple[str, ...]) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value.with_vars(variables)
    return MultiPoly.const(variables, value)


def _value_eq(a: Value, b: Value) -> bool:
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        if isinstance(a, MultiPoly) and isinstance(b, MultiPoly):
            return a == b
        if isinstance(a, MultiPoly):
            return a == Fraction(b)
        return b == Fraction(a)
    return Fraction(a) == Fraction(b)


def _value_zero(a: Value) -> bool:
    if isinstance(a, MultiPoly):
        return a.is_zero()
    return not a


class Hho2:
    """Operator data (n, T, g0), possibly with named rational parameters."""

    __slots__ = ("n", "t3", "g0", "params", "_metric", "_pf")

    def __init__(self, n: int, t3: Dict[Tuple[int, int, int], Value], g0, params: Sequence[str] = ()):
        if n < 2 or n % 2 != 0:
            raise ValueError(f"n must be even and at least 2, got {n}")
        self.n = n
        self.params = tuple(params)
        clean: Dict[Tuple[int, int, int], Value] = {}
        for key, value in t3.items():
            i, j, k = key
            if not (0 <= i < j < k < n):
                raise ValueError(f"tensor triple {key} is not strictly increasing inside range(n)")
            if not _value_zero(value):
                clean[key] = value
        self.t3 = clean
        if isinstance(g0, dict):
            mat = [[Fraction(0)] * n for _ in range(n)]
            for (i, j), value in g0.items():
                if not (0 <= i < j < n):
                    raise ValueError(f"g0 pair {(i, j)} is not strictly increasing inside range(n)")
                mat[i][j] = value
                mat[j][i] = -value if isinstance(value, MultiPoly) or value else Fraction(0)
            self.g0 = mat
        else:
            mat = [list(row) for row in g0]
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError("g0 must be an n x n matrix")
            for i in range(n):
                if not _value_zero(mat[i][i]):
                    raise ValueError("g0 has a nonzero diagonal entry")
                for j in range(i + 1, n):
                    neg = -mat[i][j] if isinstance(mat[i][j], MultiPoly) else -Fraction(mat[i][j])
                    if not _value_eq(mat[j][i], neg):
                        raise ValueError(f"g0 is not skew at ({i}, {j})")
            self.g0 = mat
        self._metric = None
        self._pf = None

    # ----- raw-tensor constructor (checks total skewness of the input) -----

    @classmethod
    def from_raw_tensor(cls, n: int, t_entries, g0, params: Sequence[str] = ()) -> "Hho2":
        """Build from arbitrary-order tensor entries (i, j, k, value).

        Entries with repeated indices must carry value zero and permuted
        triples must agree up to permutation sign, otherwise the tensor is not
        totally skew and the input is rejected.
        """
        canonical: Dict[Tuple[int, int, int], Value] = {}
        for i, j, k, value in t_entries:
            if i == j or j == k or i == k:
                if not _value_zero(value):
                    raise ValueError(f"tensor entry ({i}, {j}, {k}) with repeated index must vanish")
                continue
            order = sorted(((i, 0), (j, 1), (k, 2)))
            key = tuple(x for x, _ in order)
            sign = _SKEW3_SIGNS[tuple(pos for _, pos in order)]
            v = value if sign > 0 else (-value if isinstance(value, MultiPoly) else -Fraction(value))
            if key in canonical:
                if not _value_eq(canonical[key], v):
                    raise ValueError(f"tensor entries around {key} are not totally skew")
            else:
                canonical[key] = v
        return cls(n, canonical, g0, params)

    # ----- derived data ----------------------------------------------------

    @property
    def vars(self) -> Tuple[str, ...]:
        return tuple(f"u{i + 1}" for i in range(self.n)) + self.params

    def t_value(self, i: int, j: int, k: int) -> Value:
        if i == j or j == k or i == k:
            return Fraction(0)
        order = sorted(((i, 0), (j, 1), (k, 2)))
        key = tuple(x for x, _ in order)
        base = self.t3.get(key)
        if base is None:
            return Fraction(0)
        sign = _SKEW3_SIGNS[tuple(pos for _, pos in order)]
        if sign > 0:
            return base
        return -base if isinstance(base, MultiPoly) else -Fraction(base)

    def metric(self) -> PolyMatrix:
        """Covariant metric g(u) = T u + g0 as a polynomial matrix."""
        if self._metric is not None:
            return self._metric
        vs = self.vars
        n = self.n
        zero = MultiPoly.zero(vs)
        rows = [[zero for _ in range(n)] for _ in range(n)]
        gens = [MultiPoly.variable(vs, i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                entry = _lift(self.g0[i][j], vs)
                for k in range(n):
                    tv = self.t_value(i, j, k)
                    if not _value_zero(tv):
                        entry = entry + _lift(tv, vs) * gens[k]
                rows[i][j] = entry
                rows[j][i] = -entry
        self._metric = PolyMatrix(rows)
        return self._metric

    def pfaffian_poly(self) -> MultiPoly:
        if self._pf is None:
            self._pf = pfaffian(self.metric())
        return self._pf

    @property
    def is_degenerate(self) -> bool:
        return self.pfaffian_poly().is_zero()

    def is_numeric(self) -> bool:
        return not self.params

    def metric_at(self, point) -> List[List[Fraction]]:
        if len(point) != len(self.vars):
            raise ValueError(f"point must supply {len(self.vars)} values (u then params)")
        return self.metric().eval_at(point)

    def __eq__(self, other):
        if not isinstance(other, Hho2):
            return NotImplemented
        if self.n != other.n or self.params != other.params:
            return False
        keys = set(self.t3) | set(other.t3)
        for key in keys:
            if not _value_eq(self.t3.get(key, 0), other.t3.get(key, 0)):
                return False
        for i in range(self.n):
            for j in range(self.n):
                if not _value_eq(self.g0[i][j], other.g0[i][j]):
                    return False
        return True

    __hash__ = None

    def __repr__(self):
        return f"Hho2(n={self.n}, triples={len(self.t3)}, params={self.params})"

    # ----- serialization ----------------------------------------------------

    def to_json(self, param_values: Dict[str, Fraction] = None) -> str:
        op = self
        if self.params:
            if param_values is None:
                raise ValueError("parametric operator needs parameter values for export")
            op = self.instantiate(param_values)
        t_items = []
        for (i, j, k), value in sorted(op.t3.items()):
            t_items.append([i + 1, j + 1, k + 1, str(Fraction(value))])
        g_items = []
        for i in range(op.n):
            for j in range(i + 1, op.n):
                v = op.g0[i][j]
                if v:
                    g_items.append([i + 1, j + 1, str(Fraction(v))])
        return json.dumps({"n": op.n, "T": t_items, "g0": g_items, "params": {}}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Hho2":
        data = json.loads(text)
        try:
            n = int(data["n"])
        except (KeyError, TypeError):
            raise ValueError("malformed operator document: missing n") from None
        t3 = {}
        for pos, item in enumerate(data.get("T", [])):
            if len(item) != 4:
                raise ValueError(f"T[{pos}]: expected [i, j, k, value]")
            i, j, k, value = item
            if not (1 <= i < j < k <= n):
                raise ValueError(f"T[{pos}]: indices must be 1-based strictly increasing, got {item[:3]}")
            key = (i - 1, j - 1, k - 1)
            if key in t3:
                raise ValueError(f"T[{pos}]: duplicate triple {item[:3]}")
            t3[key] = rat(value)
        g0 = {}
        for pos, item in enumerate(data.get("g0", [])):
            if len(item) != 3:
                raise ValueError(f"g0[{pos}]: expected [i, j, value]")
            i, j, value = item
            if not (1 <= i < j <= n):
                raise ValueError(f"g0[{pos}]: indices must be 1-based strictly increasing, got {item[:2]}")
            key = (i - 1, j - 1)
            if key in g0:
                raise ValueError(f"g0[{pos}]: duplicate pair {item[:2]}")
            g0[key] = rat(value)
        if data.get("params"):
            raise ValueError("operator documents with unresolved params are not supported")
        return cls(n, t3, g0)

    def instantiate(self, param_values: Dict[str, Fraction]) -> "Hho2":
        """Substitute rational values for all named parameters."""
        missing = [p for p in self.params if p not in param_values]
        if missing:
            raise ValueError(f"missing parameter values: {', '.join(missing)}")
        def crush(v: Value) -> Fraction:
            if isinstance(v, MultiPoly):
                return v.eval([param_values[p] for p in v.vars])
            return Fraction(v)
        t3 = {key: crush(v) for key, v in self.t3.items()}
        g0 = [[crush(v) for v in row] for row in self.g0]
        return Hho2(self.n, t3, g0)


@dataclass
class ValidationReport:
    n: int
    t_total_skew: bool
    g0_skew: bool
    pfaffian: MultiPoly
    degenerate: bool
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def validate(op: Hho2) -> ValidationReport:
    """Structural report: skewness of the data and the nondegeneracy flag.

    Construction already canonicalises, so the skew checks re-derive the
    invariants from the stored data rather than trusting flags.
    """
    problems = []
    t_skew = all(0 <= i < j < k < op.n for (i, j, k) in op.t3)
    if not t_skew:
        problems.append("tensor triples out of canonical range")
    g_skew = True
    for i in range(op.n):
        if not _value_zero(op.g0[i][i]):
            g_skew = False
        for j in range(i + 1, op.n):
            neg = -op.g0[i][j] if isinstance(op.g0[i][j], MultiPoly) else -Fraction(op.g0[i][j])
            if not _value_eq(op.g0[j][i], neg):
                g_skew = False
    if not g_skew:
        problems.append("g0 is not skew")
    pf = op.pfaffian_poly()
    degenerate = pf.is_zero()
    return ValidationReport(op.n, t_skew, g_skew, pf, degenerate, problems)


def extend_tensor(op: Hho2) -> Dict[Tuple[int, int, int], Value]:
    """Extended constant tensor on n+1 indices: T on the first n, g0 in the
    slots involving the extra index."""
    ext: Dict[Tuple[int, int, int], Value] = dict(op.t3)
    n = op.n
    for i in range(n):
        for j in range(i + 1, n):
            v = op.g0[i][j]
            if not _value_zero(v):
                ext[(i, j, n)] = v
    return ext


def split_extended(ext: Dict[Tuple[int, int, int], Value], n: int):
    t3 = {}
    g0: Dict[Tuple[int, int], Value] = {}
    for (i, j, k), value in ext.items():
        if k < n:
            t3[(i, j, k)] = value
        else:
            g0[(i, j)] = value
    return t3, g0


class ProjReciprocal:
    """Projective reciprocal transformation with matrix a on n+1 homogeneous
    coordinates: ut^i = (a[i][j] u^j + a[i][n]) / A, A = a[n][j] u^j + a[n][n]."""

    __slots__ = ("a", "n")

    def __init__(self, a: LinearMapN1):
        self.a = a
        self.n = a.dim - 1
        if self.n < 1:
            raise ValueError("projective reciprocal needs dimension at least 2")

    @classmethod
    def identity(cls, n: int) -> "ProjReciprocal":
        return cls(LinearMapN1.identity(n + 1))

    def affine_factor(self, u: Sequence[Fraction]) -> Fraction:
        row = self.a.entries[self.n]
        return sum((row[j] * Fraction(u[j]) for j in range(self.n)), row[self.n])

    def chart(self, u: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        A = self.affine_factor(u)
        if not A:
            raise ZeroDivisionError(f"chart pole: affine factor vanishes at {tuple(map(str, u))}")
        out = []
        for i in range(self.n):
            row = self.a.entries[i]
            num = sum((row[j] * Fraction(u[j]) for j in range(self.n)), row[self.n])
            out.append(num / A)
        return tuple(out)

    def jacobian(self, u: Sequence[Fraction]) -> List[List[Fraction]]:
        A = self.affine_factor(u)
        if not A:
            raise ZeroDivisionError(f"chart pole: affine factor vanishes at {tuple(map(str, u))}")
        bottom = self.a.entries[self.n]
        A2 = A * A
        out = []
        for i in range(self.n):
            row = self.a.entries[i]
            num_i = sum((row[j] * Fraction(u[j]) for j in range(self.n)), row[self.n])
            out.append([(A * row[l] - num_i * bottom[l]) / A2 for l in range(self.n)])
        return out


def transform(op: Hho2, r: ProjReciprocal) -> Hho2:
    """Pull the extended tensor back along the inverse matrix.

    With this orientation the output plays the transformed-coordinates role in
    the conformal identity checked by `conformal_check`; compositions satisfy
    transform(transform(op, a), b) = transform(op, b compose a).
    """
    if r.n != op.n:
        raise ValueError(f"transformation dimension {r.n} does not match operator n={op.n}")
    ext = extend_tensor(op)
    form = ThreeForm(op.n + 1, ext, op.params)
    moved = pullback(form, r.a.inverse())
    t3, g0 = split_extended(moved.coeffs, op.n)
    return Hho2(op.n, t3, g0, op.params)


def conformal_check(op: Hho2, r: ProjReciprocal, u: Sequence[Fraction]) -> bool:
    """Exact pointwise conformal identity J^T gt(ut) J == A^{-3} g(u).

    Holds for determinant-one maps; raises at poles of the chart.
    """
    if not op.is_numeric():
        raise ValueError("conformal check needs a numeric operator")
    A = r.affine_factor(u)
    if not A:
        raise ZeroDivisionError("affine factor vanishes at the sample point")
    ut = r.chart(u)
    J = r.jacobian(u)
    gt = transform(op, r).metric_at(ut)
    g = op.metric_at(u)
    n = op.n
    scale = Fraction(1) / (A ** 3)
    for i in range(n):
        for j in range(n):
            lhs = sum(J[k][i] * sum(gt[k][l] * J[l][j] for l in range(n)) for k in range(n))
            if lhs != scale * g[i][j]:
                return False
    return True


def conformal_determinant_check(op: Hho2, r: ProjReciprocal, u: Sequence[Fraction]) -> bool:
    """Determinant consequence of the conformal identity:
    det(gt(ut)) * det(J)^2 == A^{-3n} det(g(u))."""
    A = r.affine_factor(u)
    ut = r.chart(u)
    J = r.jacobian(u)
    gt = transform(op, r).metric_at(ut)
    g = op.metric_at(u)
    lhs = rat_det(gt) * rat_det(J) ** 2
    rhs = rat_det(g) / A ** (3 * op.n)
    return lhs == rhs
