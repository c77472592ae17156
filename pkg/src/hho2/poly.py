"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial lives in a fixed ring described by an ordered tuple of variable
names.  Terms are stored sparsely as a dict mapping exponent tuples to nonzero
rational coefficients.  Coefficients are Python ints where integral and
``fractions.Fraction`` otherwise, which keeps every operation exact and the
common all-integer case fast.  The canonical term order is degree-lexicographic
(total degree first, then the exponent tuple compared left to right); it is
what ``leading_term`` and all normalisations refer to.

Values are immutable in practice: operations return new objects and never
mutate their arguments, so polynomials can be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Tuple, Union

Scalar = Union[int, Fraction]

__all__ = [
    "Scalar",
    "MultiPoly",
    "RationalFn",
    "poly_gcd",
    "poly_lcm",
    "rat",
]


def rat(value) -> Fraction:
    """Parse anything Fraction accepts (including 'p/q' strings) exactly."""
    return Fraction(value)


def _norm_coeff(c):
    """Keep exact coefficients in their leanest form (int when integral)."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c)
        return c
    if isinstance(c, int):
        return c
    raise TypeError(f"non-exact coefficient {c!r} of type {type(c).__name__}")


def _deglex_key(exp: Tuple[int, ...]):
    return (sum(exp), exp)


class MultiPoly:
    """Sparse exact polynomial in a fixed tuple of variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Tuple[int, ...], Scalar]):
        vs = tuple(variables)
        nv = len(vs)
        clean = {}
        for exp, coeff in terms.items():
            e = tuple(exp)
            if len(e) != nv:
                raise ValueError(f"exponent arity {len(e)} does not match {nv} variables")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = _norm_coeff(Fraction(coeff) if not isinstance(coeff, (int, Fraction)) else coeff)
            if c:
                clean[e] = c
        self.vars = vs
        self.terms = clean

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: dict) -> "MultiPoly":
        # Internal fast path: terms must already be canonical (no zeros,
        # correct arity, int/Fraction coefficients).
        obj = object.__new__(cls)
        obj.vars = variables
        obj.terms = terms
        return obj

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(variables), {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "MultiPoly":
        vs = tuple(variables)
        c = _norm_coeff(Fraction(value) if not isinstance(value, (int, Fraction)) else value)
        if not c:
            return cls._raw(vs, {})
        return cls._raw(vs, {(0,) * len(vs): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name_or_index) -> "MultiPoly":
        vs = tuple(variables)
        i = name_or_index if isinstance(name_or_index, int) else vs.index(name_or_index)
        exp = [0] * len(vs)
        exp[i] = 1
        return cls._raw(vs, {tuple(exp): 1})

    @classmethod
    def gens(cls, variables: Sequence[str]):
        """All generators of the ring, in order."""
        return [cls.variable(variables, i) for i in range(len(variables))]

    # ----- scalars ------------------------------------------------------

    def _lift(self, value) -> "MultiPoly":
        if isinstance(value, MultiPoly):
            if value.vars != self.vars:
                raise ValueError(f"variable mismatch: {value.vars} vs {self.vars}")
            return value
        return MultiPoly.const(self.vars, value)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return Fraction(next(iter(self.terms.values())))

    # ----- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = self._lift(other)
        elif other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = _norm_coeff(s)
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            c = _norm_coeff(other)
            if not c:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: _norm_coeff(v * c) for e, v in self.terms.items()})
        if other.vars != self.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly._raw(self.vars, {})
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(int.__add__, ea, eb))
                c = ca * cb
                if e in out:
                    s = out[e] + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
                else:
                    out[e] = c
        for e, c in out.items():
            if isinstance(c, Fraction) and c.denominator == 1:
                out[e] = int(c)
        return MultiPoly._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    __hash__ = None  # mutable dict inside; equality is structural

    # ----- queries --------------------------------------------------------

    def degree(self) -> int:
        """Total degree; zero polynomial reports -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def leading_term(self) -> Tuple[Tuple[int, ...], Scalar]:
        """(exponent, coefficient) of the deglex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_deglex_key)
        return e, self.terms[e]

    def coeff_of(self, exp: Sequence[int]) -> Fraction:
        return Fraction(self.terms.get(tuple(exp), 0))

    # ----- calculus and evaluation ----------------------------------------

    def diff(self, index: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                e2 = e[:index] + (k - 1,) + e[index + 1:]
                c2 = c * k
                if e2 in out:
                    out[e2] = out[e2] + c2
                else:
                    out[e2] = c2
        return MultiPoly._raw(self.vars, {e: _norm_coeff(c) for e, c in out.items() if c})

    def eval(self, point: Sequence) -> Fraction:
        """Exact value at a full rational point (one value per variable)."""
        vals = [Fraction(v) if not isinstance(v, (int, Fraction)) else v for v in point]
        if len(vals) != len(self.vars):
            raise ValueError(f"expected {len(self.vars)} values, got {len(vals)}")
        maxdeg = [0] * len(vals)
        for e in self.terms:
            for i, x in enumerate(e):
                if x > maxdeg[i]:
                    maxdeg[i] = x
        powers = []
        for i, v in enumerate(vals):
            ps = [1]
            for _ in range(maxdeg[i]):
                ps.append(ps[-1] * v)
            powers.append(ps)
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e):
                if x:
                    term = term * powers[i][x]
            total += term
        return Fraction(total)

    def subs(self, assignment: Mapping) -> "MultiPoly":
        """Substitute rational values for some variables (by name or index).

        The result stays in the same ring; substituted variables simply no
        longer occur.
        """
        idx = {}
        for key, val in assignment.items():
            i = key if isinstance(key, int) else self.vars.index(key)
            idx[i] = Fraction(val) if not isinstance(val, (int, Fraction)) else val
        out: dict = {}
        for e, c in self.terms.items():
            factor = c
            e2 = list(e)
            for i, v in idx.items():
                k = e[i]
                if k:
                    factor = factor * v ** k
                    e2[i] = 0
            if not factor:
                continue
            key = tuple(e2)
            if key in out:
                out[key] = out[key] + factor
            else:
                out[key] = factor
        return MultiPoly._raw(self.vars, {e: _norm_coeff(c) for e, c in out.items() if c})

    def with_vars(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into a ring whose variables contain the current ones."""
        vs = tuple(variables)
        pos = [vs.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(vs)
            for i, x in enumerate(e):
                e2[pos[i]] = x
            out[tuple(e2)] = c
        return MultiPoly._raw(vs, out)

    # ----- division and gcd support ----------------------------------------

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial quotient; raises if the division is not exact."""
        if isinstance(divisor, (int, Fraction)):
            if not divisor:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(divisor))
        if divisor.vars != self.vars:
            raise ValueError("variable mismatch in division")
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if divisor.is_constant():
            inv = Fraction(1) / divisor.constant_value()
            return self * inv
        if self.is_zero():
            return self
        de, dc = divisor.leading_term()
        q: dict = {}
        r = dict(self.terms)
        while r:
            re = max(r, key=_deglex_key)
            rc = r[re]
            qe = tuple(map(int.__sub__, re, de))
            if any(x < 0 for x in qe):
                raise ValueError("division is not exact")
            qc = _norm_coeff(Fraction(rc) / Fraction(dc))
            q[qe] = qc
            for e, c in divisor.terms.items():
                key = tuple(map(int.__add__, qe, e))
                s = r.get(key, 0) - qc * c
                if s:
                    r[key] = s
                else:
                    r.pop(key, None)
        return MultiPoly._raw(self.vars, {e: _norm_coeff(c) for e, c in q.items()})

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    def monic(self) -> "MultiPoly":
        """Scale so the deglex-leading coefficient is +1."""
        if self.is_zero():
            return self
        _, lc = self.leading_term()
        if lc == 1:
            return self
        return self * (Fraction(1) / Fraction(lc))

    def int_normalized(self) -> "MultiPoly":
        """Scale by a positive rational so coefficients are coprime integers
        with positive leading coefficient."""
        if self.is_zero():
            return self
        from math import gcd as igcd

        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            f = Fraction(c)
            num_gcd = igcd(num_gcd, abs(f.numerator))
            den_lcm = den_lcm * f.denominator // igcd(den_lcm, f.denominator)
        scale = Fraction(den_lcm, num_gcd)
        p = self * scale
        _, lc = p.leading_term()
        if lc < 0:
            p = -p
        return p

    # ----- presentation ------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: _deglex_key(t[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for name, x in zip(self.vars, e):
                if x == 1:
                    factors.append(name)
                elif x > 1:
                    factors.append(f"{name}^{x}")
            f = Fraction(c)
            coeff_str = str(f) if f.denominator != 1 else str(f.numerator)
            if factors:
                body = "*".join(factors)
                if coeff_str == "1":
                    text = body
                elif coeff_str == "-1":
                    text = "-" + body
                else:
                    text = coeff_str + "*" + body
            else:
                text = coeff_str
            parts.append(text)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    # ----- parsing -------------------------------------------------------------

    @classmethod
    def parse(cls, variables: Sequence[str], text: str) -> "MultiPoly":
        """Parse '+', '-', '*', '^', integers, fractions and variable names."""
        vs = tuple(variables)
        tokens = _tokenize(text)
        poly, pos = _parse_sum(cls, vs, tokens, 0)
        if pos != len(tokens):
            raise ValueError(f"unexpected token {tokens[pos]!r} in {text!r}")
        return poly


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "/"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ValueError(f"bad character {ch!r} in polynomial text")
    return tokens


def _parse_sum(cls, vs, tokens, pos):
    sign = 1
    if pos < len(tokens) and tokens[pos] in "+-":
        sign = -1 if tokens[pos] == "-" else 1
        pos += 1
    poly, pos = _parse_product(cls, vs, tokens, pos)
    if sign < 0:
        poly = -poly
    while pos < len(tokens) and tokens[pos] in "+-":
        sign = -1 if tokens[pos] == "-" else 1
        term, pos = _parse_product(cls, vs, tokens, pos + 1)
        poly = poly + (-term if sign < 0 else term)
    return poly, pos


def _parse_product(cls, vs, tokens, pos):
    poly, pos = _parse_power(cls, vs, tokens, pos)
    while pos < len(tokens) and tokens[pos] == "*":
        factor, pos = _parse_power(cls, vs, tokens, pos + 1)
        poly = poly * factor
    return poly, pos


def _parse_power(cls, vs, tokens, pos):
    base, pos = _parse_atom(cls, vs, tokens, pos)
    if pos < len(tokens) and tokens[pos] == "^":
        if pos + 1 >= len(tokens):
            raise ValueError("dangling '^'")
        base = base ** int(tokens[pos + 1])
        pos += 2
    return base, pos


def _parse_atom(cls, vs, tokens, pos):
    if pos >= len(tokens):
        raise ValueError("unexpected end of polynomial text")
    tok = tokens[pos]
    if tok == "(":
        poly, pos = _parse_sum(cls, vs, tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("unbalanced parentheses")
        return poly, pos + 1
    if tok == "-":
        poly, pos = _parse_power(cls, vs, tokens, pos + 1)
        return -poly, pos
    if tok[0].isdigit():
        return cls.const(vs, Fraction(tok)), pos + 1
    if tok in vs:
        return cls.variable(vs, tok), pos + 1
    raise ValueError(f"unknown variable {tok!r}; ring is {vs}")


# ----- gcd machinery ------------------------------------------------------------


def _coeffs_in_var(p: MultiPoly, index: int):
    """Split p as a univariate polynomial in variable `index` whose
    coefficients are polynomials (in the same ring, not using that variable)."""
    buckets: dict = {}
    for e, c in p.terms.items():
        d = e[index]
        e2 = e[:index] + (0,) + e[index + 1:]
        buckets.setdefault(d, {})[e2] = c
    return {d: MultiPoly._raw(p.vars, t) for d, t in buckets.items()}


def _attach_var(coeffs: Mapping[int, MultiPoly], variables, index: int) -> MultiPoly:
    out: dict = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            e2 = e[:index] + (d,) + e[index + 1:]
            out[e2] = c
    return MultiPoly._raw(tuple(variables), out)


def _pseudo_rem(f: Mapping[int, MultiPoly], g: Mapping[int, MultiPoly]):
    """Pseudo-remainder of univariate-with-poly-coefficient representations."""
    df = max(f)
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        shift = dr - dg
        new: dict = {}
        for d, c in r.items():
            new[d] = c * lg
        for d, c in g.items():
            key = d + shift
            term = c * lr
            if key in new:
                s = new[key] - term
            else:
                s = -term
            new[key] = s
        r = {d: c for d, c in new.items() if not c.is_zero()}
    return r


def _content_of_coeffs(coeffs) -> MultiPoly:
    acc = None
    for p in coeffs.values():
        acc = p if acc is None else poly_gcd(acc, p)
        if acc.is_constant() and not acc.is_zero():
            break
    return acc


def _gcd_via_sympy(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    import sympy

    gens = sympy.symbols(f.vars)

    def lift(p: MultiPoly):
        return sympy.Poly.from_dict(
            {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()},
            *gens,
            domain="QQ",
        )

    h = lift(f).gcd(lift(g))
    dom = h.domain
    terms = {}
    for monom, coeff in h.terms():
        r = dom.to_sympy(coeff)
        terms[tuple(int(m) for m in monom)] = Fraction(int(r.p), int(r.q))
    return MultiPoly(f.vars, terms).monic()


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """GCD in Q[vars], normalised monic (deglex leading coefficient +1).

    Uses a primitive pseudo-remainder sequence recursively over the variables
    for one or two variables; larger rings are delegated to sympy, whose
    modular gcd avoids the coefficient blowup of the naive sequence.
    """
    if f.vars != g.vars:
        raise ValueError("variable mismatch in gcd")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(f.vars, 1)
    if len(f.vars) >= 3:
        return _gcd_via_sympy(f, g)
    main = None
    for i in reversed(range(len(f.vars))):
        if f.degree_in(i) > 0 and g.degree_in(i) > 0:
            main = i
            break
    if main is None:
        # No shared variable: gcd is the gcd of contents w.r.t. any variable
        # used by one of them, which reduces to a constant here.
        for i in reversed(range(len(f.vars))):
            if f.degree_in(i) > 0:
                cf = _content_of_coeffs(_coeffs_in_var(f, i))
                return poly_gcd(cf, g)
        return MultiPoly.const(f.vars, 1)

    fc = _coeffs_in_var(f, main)
    gc = _coeffs_in_var(g, main)
    cont_f = _content_of_coeffs(fc)
    cont_g = _content_of_coeffs(gc)
    pp_f = {d: c.exact_div(cont_f) for d, c in fc.items()}
    pp_g = {d: c.exact_div(cont_g) for d, c in gc.items()}
    if max(pp_f) < max(pp_g):
        pp_f, pp_g = pp_g, pp_f
    while True:
        r = _pseudo_rem(pp_f, pp_g)
        if not r:
            break
        if max(r) == 0:
            # Nonzero constant (in the main variable) remainder: coprime parts.
            pp_g = {0: MultiPoly.const(f.vars, 1)}
            break
        cont_r = _content_of_coeffs(r)
        pp_f = pp_g
        pp_g = {d: c.exact_div(cont_r) for d, c in r.items()}
    result = _attach_var(pp_g, f.vars, main) * poly_gcd(cont_f, cont_g)
    return result.monic()


def poly_lcm(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    if f.is_zero() or g.is_zero():
        return MultiPoly.zero(f.vars)
    return (f * g).exact_div(poly_gcd(f, g)).monic()


class RationalFn:
    """Reduced fraction of two MultiPoly in the same ring.

    Invariants: the denominator is nonzero, gcd(num, den) is a unit, and the
    denominator's deglex leading coefficient equals +1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly = None, reduce: bool = True):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        if num.vars != den.vars:
            raise ValueError("variable mismatch in rational function")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = MultiPoly.const(num.vars, 1)
        elif reduce:
            if den.is_constant():
                num = num * (Fraction(1) / Fraction(den.constant_value()))
                den = MultiPoly.const(num.vars, 1)
            else:
                g = poly_gcd(num, den)
                if not (g.is_constant() and g.constant_value() == 1):
                    num = num.exact_div(g)
                    den = den.exact_div(g)
                _, lc = den.leading_term()
                if lc != 1:
                    inv = Fraction(1) / Fraction(lc)
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    # ----- constructors ---------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalFn":
        return cls(p, MultiPoly.const(p.vars, 1), reduce=False)

    @classmethod
    def const(cls, variables, value) -> "RationalFn":
        return cls.from_poly(MultiPoly.const(variables, value))

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_poly():
            raise ValueError(f"not polynomial: {self}")
        return self.num * (Fraction(1) / Fraction(self.den.constant_value()))

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    # ----- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, MultiPoly):
            return RationalFn.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFn.const(self.vars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, MultiPoly)):
            other = self._coerce(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def diff(self, index: int) -> "RationalFn":
        return RationalFn(
            self.num.diff(index) * self.den - self.num * self.den.diff(index),
            self.den * self.den,
        )

    def eval(self, point) -> Fraction:
        d = self.den.eval(point)
        if not d:
            raise ZeroDivisionError(f"pole at {tuple(map(str, point))}")
        return self.num.eval(point) / d

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num} / {den}"

    def __repr__(self):
        return f"RationalFn({self})"
