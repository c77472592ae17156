"""Quasilinear conservation-law systems u_t = (V(u))_x generated by operators.

The flux vector is V = g^{-1} W + c with W_j = A_jl u^l + B_j, A constant
skew, B and c constant vectors.  Every component is a rational function whose
denominator divides the Pfaffian D of the metric and whose numerator Q_k has
degree at most n/2.

Compatibility of the pair (metric, flux) is expressed by two families of
polynomial identities obtained by clearing denominators with powers of D:

  first order   (all q <= p):     sum_j g_qj R_jp + g_pj R_jq = 0
  second order  (all q, p <= l):  sum_k g_qk S_kpl
                                   + D (T_pqk R_kl + T_qkl R_kp) = 0

where R_kp = Q_{k,p} D - Q_k D_p is the numerator of dV^k/du^p over D^2 and
S_kpl = R_{kp,l} D - 2 R_kp D_l is the numerator of the second derivative
over D^3.  The derivatives here are genuine quotient-rule derivatives of the
flux components; the checks do not assume any structural identity that would
make them vacuous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .linalg import PolyMatrix, pfaffian_adjugate, poly_rank, rat_kernel, rat_rank
from .operators import Hho2
from .poly import Fraction as _Fr  # noqa: F401  (re-exported convenience)
from .poly import MultiPoly, RationalFn, rat

__all__ = [
    "DegenerateOperatorError",
    "FluxParams",
    "ConservativeSystem",
    "generate_flux",
    "random_flux_params",
    "CompatReport",
    "check_compat",
    "check_compat_rational",
    "PlueckerReport",
    "pluecker_relations",
    "congruence_lines",
    "hamiltonian_density",
    "EulerReport",
    "euler_check",
    "CasimirReport",
    "casimir_check",
    "LinearityReport",
    "linearity_report",
    "family_parameter_count",
]


class DegenerateOperatorError(ValueError):
    """Raised when flux generation is attempted on a degenerate operator."""


def family_parameter_count(n: int) -> int:
    """Number of flux parameters (A, B, c) for fixed operator: n(n+3)/2.

    A contributes n(n-1)/2 skew entries, B and c contribute n each.  The map
    (A, B, c) -> V is not injective: shifting c can be absorbed into (A, B).
    """
    return n * (n + 3) // 2


@dataclass(frozen=True)
class FluxParams:
    """Constant data (A, B) of the affine form W = A u + B, with A skew."""

    a: Tuple[Tuple[Fraction, ...], ...]
    b: Tuple[Fraction, ...]

    @staticmethod
    def make(a, b) -> "FluxParams":
        n = len(b)
        mat = [[Fraction(x) for x in row] for row in a]
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ValueError("A must be square of size len(B)")
        for i in range(n):
            if mat[i][i]:
                raise ValueError("A has a nonzero diagonal entry")
            for j in range(i + 1, n):
                if mat[j][i] != -mat[i][j]:
                    raise ValueError(f"A is not skew at ({i}, {j})")
        return FluxParams(tuple(tuple(row) for row in mat), tuple(Fraction(x) for x in b))

    @property
    def n(self) -> int:
        return len(self.b)


def random_flux_params(n: int, rng, bound: int = 5) -> FluxParams:
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = Fraction(rng.randint(-bound, bound))
            a[j][i] = -a[i][j]
    b = [Fraction(rng.randint(-bound, bound)) for _ in range(n)]
    return FluxParams.make(a, b)


class ConservativeSystem:
    """Operator together with a generated flux vector V = g^{-1}(Au + B) + c."""

    def __init__(self, op: Hho2, flux: FluxParams, constants: Optional[Sequence] = None):
        if not op.is_numeric():
            raise ValueError("flux generation needs a fully numeric operator")
        if op.is_degenerate:
            raise DegenerateOperatorError(
                "the metric Pfaffian vanishes identically; no flux vector exists"
            )
        if flux.n != op.n:
            raise ValueError(f"flux parameters are for n={flux.n}, operator has n={op.n}")
        self.op = op
        self.flux = flux
        n = op.n
        if constants is None:
            self.constants: Tuple[Fraction, ...] = tuple(Fraction(0) for _ in range(n))
        else:
            if len(constants) != n:
                raise ValueError("constants must have length n")
            self.constants = tuple(Fraction(c) for c in constants)

        vs = op.vars
        self.vars = vs
        self.d = op.pfaffian_poly()
        cadj, pf = pfaffian_adjugate(op.metric())
        if pf != self.d:
            raise AssertionError("inconsistent Pfaffian between metric routes")
        gens = [MultiPoly.variable(vs, i) for i in range(n)]
        self.w = []
        for j in range(n):
            expr = MultiPoly.const(vs, flux.b[j])
            for l in range(n):
                if flux.a[j][l]:
                    expr = expr + gens[l] * flux.a[j][l]
            self.w.append(expr)
        self.q: List[MultiPoly] = []
        for k in range(n):
            acc = MultiPoly.zero(vs)
            for j in range(n):
                cj = cadj.at(k, j)
                if not cj.is_zero() and not self.w[j].is_zero():
                    acc = acc + cj * self.w[j]
            if self.constants[k]:
                acc = acc + self.d * self.constants[k]
            self.q.append(acc)
        self.v: List[RationalFn] = [RationalFn(qk, self.d) for qk in self.q]

        # Effective affine data absorbing the additive constants; these are
        # what the eigenvalue pencil sees alongside the actual V.
        a_eff = [[Fraction(flux.a[h][j]) for j in range(n)] for h in range(n)]
        b_eff = [Fraction(flux.b[j]) for j in range(n)]
        if any(self.constants):
            for h in range(n):
                for j in range(n):
                    shift = Fraction(0)
                    for i in range(n):
                        ci = self.constants[i]
                        if ci:
                            shift += Fraction(op.t_value(h, i, j)) * ci
                    a_eff[h][j] += shift
                g0row = op.g0[h]
                b_eff[h] += sum(
                    (Fraction(g0row[k]) * self.constants[k] for k in range(n)), Fraction(0)
                )
        self.a_eff = tuple(tuple(row) for row in a_eff)
        self.b_eff = tuple(b_eff)

        self._d1: Optional[List[MultiPoly]] = None
        self._d2: Optional[Dict[Tuple[int, int], MultiPoly]] = None
        self._q1: Optional[List[List[MultiPoly]]] = None
        self._q2: Optional[List[Dict[Tuple[int, int], MultiPoly]]] = None
        self._r: Optional[List[List[MultiPoly]]] = None
        self._mtilde: Optional[PolyMatrix] = None
        # Diagnostics evaluate several tensors at the same points; memoize
        # the two expensive per-point tables (bounded, copies handed out).
        self._jac_cache: Dict[tuple, List[List[Fraction]]] = {}
        self._hess_cache: Dict[tuple, List[List[List[Fraction]]]] = {}

    # ----- derivative tables ------------------------------------------------

    def _ensure_first(self):
        if self._d1 is None:
            n = self.op.n
            self._d1 = [self.d.diff(p) for p in range(n)]
            self._q1 = [[self.q[k].diff(p) for p in range(n)] for k in range(n)]

    def _ensure_second(self):
        self._ensure_first()
        if self._d2 is None:
            n = self.op.n
            self._d2 = {}
            for p in range(n):
                for l in range(p, n):
                    self._d2[(p, l)] = self._d1[p].diff(l)
            self._q2 = []
            for k in range(n):
                table: Dict[Tuple[int, int], MultiPoly] = {}
                for p in range(n):
                    for l in range(p, n):
                        table[(p, l)] = self._q1[k][p].diff(l)
                self._q2.append(table)

    def r_polys(self) -> List[List[MultiPoly]]:
        """R[k][p] = Q_{k,p} D - Q_k D_p (numerator of dV^k/du^p over D^2)."""
        if self._r is None:
            self._ensure_first()
            n = self.op.n
            self._r = [
                [self._q1[k][p] * self.d - self.q[k] * self._d1[p] for p in range(n)]
                for k in range(n)
            ]
        return self._r

    # ----- pointwise exact evaluation ----------------------------------------

    def _point(self, u) -> Tuple[Fraction, ...]:
        point = tuple(Fraction(x) for x in u)
        if len(point) != self.op.n:
            raise ValueError(f"point must have {self.op.n} coordinates")
        return point

    def pfaffian_at(self, u) -> Fraction:
        return self.d.eval(self._point(u))

    def flux_at(self, u) -> List[Fraction]:
        point = self._point(u)
        d = self.d.eval(point)
        if d == 0:
            raise ZeroDivisionError("point lies on the degeneracy locus")
        return [qk.eval(point) / d for qk in self.q]

    def jacobian_at(self, u) -> List[List[Fraction]]:
        point = self._point(u)
        cached = self._jac_cache.get(point)
        if cached is None:
            self._ensure_first()
            n = self.op.n
            d = self.d.eval(point)
            if d == 0:
                raise ZeroDivisionError("point lies on the degeneracy locus")
            d2 = d * d
            qv = [qk.eval(point) for qk in self.q]
            d1v = [dp.eval(point) for dp in self._d1]
            cached = []
            for k in range(n):
                row = []
                q1k = self._q1[k]
                for p in range(n):
                    row.append((q1k[p].eval(point) * d - qv[k] * d1v[p]) / d2)
                cached.append(row)
            if len(self._jac_cache) >= 128:
                self._jac_cache.pop(next(iter(self._jac_cache)))
            self._jac_cache[point] = cached
        return [row[:] for row in cached]

    def hessian_at(self, u) -> List[List[List[Fraction]]]:
        """hess[k][p][l] = d^2 V^k / du^p du^l, exact at the point."""
        point = self._point(u)
        hess = self._hess_cache.get(point)
        if hess is None:
            self._ensure_second()
            n = self.op.n
            d = self.d.eval(point)
            if d == 0:
                raise ZeroDivisionError("point lies on the degeneracy locus")
            d3 = d ** 3
            qv = [qk.eval(point) for qk in self.q]
            d1v = [dp.eval(point) for dp in self._d1]
            d2v = {key: poly.eval(point) for key, poly in self._d2.items()}
            q1v = [[self._q1[k][p].eval(point) for p in range(n)] for k in range(n)]
            q2v = [
                {key: poly.eval(point) for key, poly in self._q2[k].items()} for k in range(n)
            ]
            hess = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
            for k in range(n):
                for p in range(n):
                    for l in range(p, n):
                        key = (p, l)
                        r_kp = q1v[k][p] * d - qv[k] * d1v[p]
                        r_kpl = (
                            q2v[k][key] * d
                            + q1v[k][p] * d1v[l]
                            - q1v[k][l] * d1v[p]
                            - qv[k] * d2v[key]
                        )
                        s = r_kpl * d - 2 * r_kp * d1v[l]
                        value = s / d3
                        hess[k][p][l] = value
                        hess[k][l][p] = value
            if len(self._hess_cache) >= 128:
                self._hess_cache.pop(next(iter(self._hess_cache)))
            self._hess_cache[point] = hess
        return [[row[:] for row in plane] for plane in hess]

    # ----- eigenvalue pencil -------------------------------------------------

    def mtilde(self) -> PolyMatrix:
        """Skew pencil D*M(lam) with M_hj = T_hji V^i + Aeff_hj - lam g_hj.

        Entries are polynomials in (u1..un, lam); the Pfaffian of this matrix
        divided by D^(n/2 + 1) is the square root of the characteristic
        polynomial of the flux Jacobian.
        """
        if self._mtilde is not None:
            return self._mtilde
        n = self.op.n
        rvars = self.vars + ("lam",)
        lam = MultiPoly.variable(rvars, "lam")
        dlift = self.d.with_vars(rvars)
        g = self.op.metric()
        rows = [[MultiPoly.zero(rvars) for _ in range(n)] for _ in range(n)]
        for h in range(n):
            for j in range(h + 1, n):
                entry = MultiPoly.zero(rvars)
                for i in range(n):
                    t = Fraction(self.op.t_value(h, j, i))
                    if t:
                        entry = entry + self.q[i].with_vars(rvars) * t
                if self.a_eff[h][j]:
                    entry = entry + dlift * self.a_eff[h][j]
                entry = entry - lam * dlift * self._metric_entry_lifted(h, j, rvars)
                rows[h][j] = entry
                rows[j][h] = -entry
        self._mtilde = PolyMatrix(rows)
        return self._mtilde

    def _metric_entry_lifted(self, h: int, j: int, rvars) -> MultiPoly:
        return self.op.metric().at(h, j).with_vars(rvars)

    # ----- reports ------------------------------------------------------------

    def flux_denominator_report(self) -> dict:
        """Degrees of the flux numerators and the divisibility of denominators."""
        n = self.op.n
        rows = []
        ok = True
        for k in range(n):
            divides = self.v[k].den.divides(self.d)
            deg_ok = self.q[k].degree() <= n // 2
            ok = ok and divides and deg_ok
            rows.append(
                {
                    "component": k + 1,
                    "numerator_degree": self.q[k].degree(),
                    "degree_bound": n // 2,
                    "denominator_divides_pfaffian": divides,
                }
            )
        return {"ok": ok, "pfaffian_degree": self.d.degree(), "components": rows}

    # ----- serialization --------------------------------------------------------

    def to_json(self) -> str:
        n = self.op.n
        a_items = []
        for i in range(n):
            for j in range(i + 1, n):
                if self.flux.a[i][j]:
                    a_items.append([i + 1, j + 1, str(self.flux.a[i][j])])
        doc = {
            "op": json.loads(self.op.to_json()),
            "A": a_items,
            "B": [str(x) for x in self.flux.b],
        }
        if any(self.constants):
            doc["constants"] = [str(x) for x in self.constants]
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConservativeSystem":
        data = json.loads(text)
        if "op" not in data:
            raise ValueError("malformed system document: missing op")
        op = Hho2.from_json(json.dumps(data["op"]))
        n = op.n
        if "B" not in data or len(data["B"]) != n:
            raise ValueError("malformed system document: B must list n values")
        a = [[Fraction(0)] * n for _ in range(n)]
        for pos, item in enumerate(data.get("A", [])):
            if len(item) != 3:
                raise ValueError(f"A[{pos}]: expected [i, j, value]")
            i, j, value = item
            if not (1 <= i < j <= n):
                raise ValueError(f"A[{pos}]: indices must be 1-based with i < j <= n")
            if a[i - 1][j - 1]:
                raise ValueError(f"A[{pos}]: duplicate pair")
            a[i - 1][j - 1] = rat(value)
            a[j - 1][i - 1] = -a[i - 1][j - 1]
        b = [rat(x) for x in data["B"]]
        constants = [rat(x) for x in data["constants"]] if "constants" in data else None
        return cls(op, FluxParams.make(a, b), constants)

    def __repr__(self):
        return f"ConservativeSystem(n={self.op.n})"


def generate_flux(
    op: Hho2, flux: Optional[FluxParams] = None, constants=None, rng=None, bound: int = 5
) -> ConservativeSystem:
    """Build the conservative system for the operator.

    Either pass explicit flux parameters or a seeded rng to draw them.
    """
    if flux is None:
        if rng is None:
            raise ValueError("need either flux parameters or an rng to draw them")
        flux = random_flux_params(op.n, rng, bound)
    return ConservativeSystem(op, flux, constants)


# ----- compatibility checks -----------------------------------------------------


@dataclass
class CompatReport:
    mode: str
    n: int
    first_order_failures: List[tuple] = field(default_factory=list)
    second_order_failures: List[tuple] = field(default_factory=list)
    points_checked: Optional[int] = None

    @property
    def first_order_ok(self) -> bool:
        return not self.first_order_failures

    @property
    def second_order_ok(self) -> bool:
        return not self.second_order_failures

    @property
    def passed(self) -> bool:
        return self.first_order_ok and self.second_order_ok

    def summary(self) -> str:
        where = f" at {self.points_checked} points" if self.points_checked is not None else ""
        if self.passed:
            return f"compatible ({self.mode}{where}): both identity families hold"
        return (
            f"NOT compatible ({self.mode}{where}): "
            f"{len(self.first_order_failures)} first-order and "
            f"{len(self.second_order_failures)} second-order identities fail"
        )


def _check_compat_symbolic(system: ConservativeSystem) -> CompatReport:
    n = system.op.n
    g = system.op.metric()
    r = system.r_polys()
    system._ensure_second()
    d = system.d
    d1 = system._d1
    report = CompatReport(mode="symbolic", n=n)

    for q in range(n):
        for p in range(q, n):
            acc = MultiPoly.zero(system.vars)
            for j in range(n):
                gqj = g.at(q, j)
                gpj = g.at(p, j)
                if not gqj.is_zero():
                    acc = acc + gqj * r[j][p]
                if not gpj.is_zero():
                    acc = acc + gpj * r[j][q]
            if not acc.is_zero():
                report.first_order_failures.append((q + 1, p + 1))

    rd = [[r[k][l] * d for l in range(n)] for k in range(n)]
    s_table: List[Dict[Tuple[int, int], MultiPoly]] = []
    for k in range(n):
        table: Dict[Tuple[int, int], MultiPoly] = {}
        for p in range(n):
            for l in range(p, n):
                r_kpl = (
                    system._q2[k][(p, l)] * d
                    + system._q1[k][p] * d1[l]
                    - system._q1[k][l] * d1[p]
                    - system.q[k] * system._d2[(p, l)]
                )
                table[(p, l)] = r_kpl * d - 2 * r[k][p] * d1[l]
        s_table.append(table)

    for q in range(n):
        for p in range(n):
            for l in range(p, n):
                acc = MultiPoly.zero(system.vars)
                for k in range(n):
                    gqk = g.at(q, k)
                    if not gqk.is_zero():
                        acc = acc + gqk * s_table[k][(p, l)]
                    t1 = Fraction(system.op.t_value(p, q, k))
                    if t1:
                        acc = acc + rd[k][l] * t1
                    t2 = Fraction(system.op.t_value(q, k, l))
                    if t2:
                        acc = acc + rd[k][p] * t2
                if not acc.is_zero():
                    report.second_order_failures.append((q + 1, p + 1, l + 1))
    return report


def _check_compat_points(system: ConservativeSystem, points) -> CompatReport:
    n = system.op.n
    report = CompatReport(mode="points", n=n, points_checked=0)
    fail1 = set()
    fail2 = set()
    for u in points:
        point = system._point(u)
        gmat = system.op.metric_at(point)
        jac = system.jacobian_at(point)
        hess = system.hessian_at(point)
        for q in range(n):
            for p in range(q, n):
                total = Fraction(0)
                for j in range(n):
                    total += gmat[q][j] * jac[j][p] + gmat[p][j] * jac[j][q]
                if total:
                    fail1.add((q + 1, p + 1))
        for q in range(n):
            for p in range(n):
                for l in range(p, n):
                    total = Fraction(0)
                    for k in range(n):
                        total += gmat[q][k] * hess[k][p][l]
                        t1 = Fraction(system.op.t_value(p, q, k))
                        if t1:
                            total += t1 * jac[k][l]
                        t2 = Fraction(system.op.t_value(q, k, l))
                        if t2:
                            total += t2 * jac[k][p]
                    if total:
                        fail2.add((q + 1, p + 1, l + 1))
        report.points_checked += 1
    report.first_order_failures = sorted(fail1)
    report.second_order_failures = sorted(fail2)
    return report


def check_compat(system: ConservativeSystem, mode: str = "symbolic", points=None) -> CompatReport:
    """Verify the compatibility identities for a generated system.

    mode "symbolic" proves them as polynomial identities (practical up to
    n = 6); mode "points" checks them exactly at the given sample points,
    which is the intended route for n = 8.
    """
    if mode == "symbolic":
        return _check_compat_symbolic(system)
    if mode == "points":
        if not points:
            raise ValueError("mode 'points' needs a nonempty list of sample points")
        return _check_compat_points(system, points)
    raise ValueError(f"unknown mode {mode!r}; use 'symbolic' or 'points'")


def check_compat_rational(op: Hho2, v: Sequence[RationalFn]) -> CompatReport:
    """Compatibility identities for an arbitrary flux vector given as rational
    functions of u.  Works directly with quotient-rule derivatives; used to
    cross-check the cleared-denominator route and to test foreign vectors.
    """
    n = op.n
    if len(v) != n:
        raise ValueError("flux vector must have n components")
    vs = op.vars
    v = [RationalFn(x.num.with_vars(vs), x.den.with_vars(vs)) for x in v]
    g = op.metric()
    report = CompatReport(mode="rational", n=n)
    jac = [[v[k].diff(p) for p in range(n)] for k in range(n)]
    hess = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for p in range(n):
            for l in range(p, n):
                hess[k][p][l] = jac[k][p].diff(l)
                hess[k][l][p] = hess[k][p][l]
    zero = RationalFn.const(vs, 0)
    for q in range(n):
        for p in range(q, n):
            acc = zero
            for j in range(n):
                gqj = g.at(q, j)
                gpj = g.at(p, j)
                if not gqj.is_zero():
                    acc = acc + jac[j][p] * gqj
                if not gpj.is_zero():
                    acc = acc + jac[j][q] * gpj
            if not acc.is_zero():
                report.first_order_failures.append((q + 1, p + 1))
    for q in range(n):
        for p in range(n):
            for l in range(p, n):
                acc = zero
                for k in range(n):
                    gqk = g.at(q, k)
                    if not gqk.is_zero():
                        acc = acc + hess[k][p][l] * gqk
                    t1 = Fraction(op.t_value(p, q, k))
                    if t1:
                        acc = acc + jac[k][l] * t1
                    t2 = Fraction(op.t_value(q, k, l))
                    if t2:
                        acc = acc + jac[k][p] * t2
                if not acc.is_zero():
                    report.second_order_failures.append((q + 1, p + 1, l + 1))
    return report


# ----- linear line congruence ---------------------------------------------------


@dataclass
class PlueckerReport:
    n: int
    row_ok: List[bool]
    congruence_rank: int
    congruence_dim: int

    @property
    def passed(self) -> bool:
        return all(self.row_ok)


def pluecker_relations(system: ConservativeSystem) -> PlueckerReport:
    """Check the n linear relations tying the flux to the tensor data:

        (1/2) T_jkl (u^l V^k - u^k V^l) + g0_jk V^k = Aeff_jl u^l + Beff_j

    cleared by D (so V^k is replaced by Q_k and the right side gains a factor
    D).  The effective parameters absorb the optional additive constants; with
    constants zero they are the raw (A, B).
    """
    n = system.op.n
    vs = system.vars
    gens = [MultiPoly.variable(vs, i) for i in range(n)]
    half = Fraction(1, 2)
    row_ok = []
    for j in range(n):
        acc = MultiPoly.zero(vs)
        for k in range(n):
            for l in range(n):
                t = Fraction(system.op.t_value(j, k, l))
                if t:
                    acc = acc + (gens[l] * system.q[k] - gens[k] * system.q[l]) * (t * half)
            g0jk = Fraction(system.op.g0[j][k])
            if g0jk:
                acc = acc + system.q[k] * g0jk
        rhs = MultiPoly.const(vs, system.b_eff[j])
        for l in range(n):
            if system.a_eff[j][l]:
                rhs = rhs + gens[l] * system.a_eff[j][l]
        row_ok.append(acc == rhs * system.d)

    # The associated line congruence y^i = u^i y^{n+1} + V^i y^{n+2} defines,
    # for each u off the degeneracy locus, a 2-plane of solutions spanned by
    # (u, 1, 0) and (V, 0, 1); its rank is always 2.
    return PlueckerReport(n=n, row_ok=row_ok, congruence_rank=2, congruence_dim=2)


def congruence_lines(system: ConservativeSystem, u) -> Tuple[List[Fraction], List[Fraction]]:
    """Spanning vectors of the solution plane of the line congruence at u."""
    point = system._point(u)
    vvals = system.flux_at(point)
    first = list(point) + [Fraction(1), Fraction(0)]
    second = list(vvals) + [Fraction(0), Fraction(1)]
    return first, second


# ----- Hamiltonian structure ------------------------------------------------------


def _density_ring(n: int) -> Tuple[str, ...]:
    base = tuple(f"b{i + 1}" for i in range(n))
    first = tuple(f"b{i + 1}x" for i in range(n))
    second = tuple(f"b{i + 1}xx" for i in range(n))
    return base + first + second


def hamiltonian_density(system: ConservativeSystem) -> MultiPoly:
    """First-order density h(b, b_x) = -(A_sl b^l_x / 2 + B_s) b^s.

    The ring carries formal jet variables b, b_x, b_xx so that the total
    x-derivative and the variational derivative stay inside one ring.
    """
    n = system.op.n
    ring = _density_ring(n)
    b = [MultiPoly.variable(ring, i) for i in range(n)]
    bx = [MultiPoly.variable(ring, n + i) for i in range(n)]
    h = MultiPoly.zero(ring)
    for s in range(n):
        inner = MultiPoly.const(ring, system.flux.b[s])
        for l in range(n):
            if system.flux.a[s][l]:
                inner = inner + bx[l] * (system.flux.a[s][l] * Fraction(1, 2))
        h = h - inner * b[s]
    return h


def _total_x_derivative(f: MultiPoly, n: int) -> MultiPoly:
    """D_x f for f in the jet ring: replaces b -> b_x -> b_xx chains."""
    ring = f.vars
    out = MultiPoly.zero(ring)
    for i in range(n):
        out = out + f.diff(i) * MultiPoly.variable(ring, n + i)
        out = out + f.diff(n + i) * MultiPoly.variable(ring, 2 * n + i)
    return out


@dataclass
class EulerReport:
    n: int
    component_ok: List[bool]
    residuals: List[MultiPoly]

    @property
    def passed(self) -> bool:
        return all(self.component_ok)


def euler_check(system: ConservativeSystem) -> EulerReport:
    """Variational derivative check: delta h / delta b^k = -A_ks b^s_x - B_k.

    Both sides live in the jet ring; the identity must hold exactly.  The
    additive constants c do not enter: they drop out of the dynamics under
    the outer x-derivative.
    """
    n = system.op.n
    h = hamiltonian_density(system)
    ring = h.vars
    bx = [MultiPoly.variable(ring, n + i) for i in range(n)]
    component_ok = []
    residuals = []
    for k in range(n):
        vari = h.diff(k) - _total_x_derivative(h.diff(n + k), n)
        target = MultiPoly.const(ring, -system.flux.b[k])
        for s in range(n):
            if system.flux.a[k][s]:
                target = target - bx[s] * system.flux.a[k][s]
        residual = vari - target
        residuals.append(residual)
        component_ok.append(residual.is_zero())
    return EulerReport(n=n, component_ok=component_ok, residuals=residuals)


@dataclass
class CasimirReport:
    n: int
    metric_rank: int
    corank: int
    nondegenerate: bool

    @property
    def casimir_count(self) -> int:
        """Dimension of the kernel of the metric; nonconstant Casimir densities
        of the bracket correspond to this corank, so a nondegenerate operator
        has none."""
        return self.corank


def casimir_check(op: Hho2) -> CasimirReport:
    rank = poly_rank(op.metric())
    return CasimirReport(
        n=op.n, metric_rank=rank, corank=op.n - rank, nondegenerate=rank == op.n
    )


# ----- linearity and linear degeneracy ----------------------------------------------


@dataclass
class LinearityReport:
    n: int
    is_linear: bool
    checked_points: int
    checked_eigenvalues: int
    skipped_eigenvalues: int
    gradients_orthogonal: bool

    @property
    def linearly_degenerate_confirmed(self) -> bool:
        return self.gradients_orthogonal and self.checked_eigenvalues > 0


def linearity_report(system: ConservativeSystem, points=None) -> LinearityReport:
    """Detect linear systems and spot-check linear degeneracy at points.

    Linearity is exact: V is linear iff each component is a polynomial of
    degree at most one.  Linear degeneracy is verified at the supplied sample
    points for every simple rational eigenvalue: the gradient of the
    eigenvalue (by implicit differentiation of the Pfaffian pencil) must be
    orthogonal to every eigenvector of that eigenvalue.  Non-rational or
    repeated roots at a point are counted as skipped.
    """
    n = system.op.n
    is_linear = all(vk.is_poly() and vk.as_poly().degree() <= 1 for vk in system.v)
    checked_points = 0
    checked = 0
    skipped = 0
    all_orth = True
    if points:
        from .diagnostics import sqrt_charpoly_at, _rational_roots

        mt = system.mtilde()
        rvars = mt.at(0, 1).vars if n >= 2 else system.vars + ("lam",)
        lam_index = len(rvars) - 1
        pf_pencil = None
        for u in points:
            point = system._point(u)
            jac = system.jacobian_at(point)
            s_coeffs = sqrt_charpoly_at(system, point)
            roots = _rational_roots(s_coeffs)
            simple = [root for root, mult in roots if mult == 1]
            skipped += sum(1 for _, mult in roots if mult > 1)
            if not simple:
                checked_points += 1
                continue
            if pf_pencil is None:
                from .linalg import pfaffian

                pf_pencil = pfaffian(mt)
                pf_grad = [pf_pencil.diff(m) for m in range(n)]
                pf_dlam = pf_pencil.diff(lam_index)
            for root in simple:
                full = point + (root,)
                denom = pf_dlam.eval(full)
                if denom == 0:
                    skipped += 1
                    continue
                grad = [-(pf_grad[m].eval(full)) / denom for m in range(n)]
                mat = [
                    [jac[i][j] - (root if i == j else 0) for j in range(n)] for i in range(n)
                ]
                kernel = rat_kernel(mat)
                if not kernel:
                    skipped += 1
                    continue
                for vecs in kernel:
                    pairing = sum(grad[m] * vecs[m] for m in range(n))
                    if pairing != 0:
                        all_orth = False
                checked += 1
            checked_points += 1
    return LinearityReport(
        n=n,
        is_linear=is_linear,
        checked_points=checked_points,
        checked_eigenvalues=checked,
        skipped_eigenvalues=skipped,
        gradients_orthogonal=all_orth,
    )
