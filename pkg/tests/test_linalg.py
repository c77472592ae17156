import random
from fractions import Fraction

import pytest

from hho2.linalg import (
    PolyMatrix,
    det_bareiss,
    det_minor_expansion,
    inverse_skew,
    pfaffian,
    pfaffian_adjugate,
    poly_rank,
    rat_det,
    rat_inverse,
    rat_kernel,
    rat_rank,
)
from hho2.poly import MultiPoly

VARS = ("x", "y")


def rand_poly(rng, max_deg=2, terms=3, bound=5):
    out = {}
    for _ in range(terms):
        exp = tuple(rng.randint(0, max_deg) for _ in VARS)
        out[exp] = out.get(exp, 0) + rng.randint(-bound, bound)
    return MultiPoly(VARS, out)


def rand_matrix(rng, n, **kw):
    return PolyMatrix([[rand_poly(rng, **kw) for _ in range(n)] for _ in range(n)])


def rand_skew(rng, n, **kw):
    rows = [[MultiPoly.zero(VARS) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            p = rand_poly(rng, **kw)
            rows[i][j] = p
            rows[j][i] = -p
    return PolyMatrix(rows)


def test_det_routes_agree():
    rng = random.Random(2)
    for n in (1, 2, 3, 4):
        for _ in range(6):
            m = rand_matrix(rng, n, max_deg=1, terms=2)
            assert det_bareiss(m) == det_minor_expansion(m)


def test_det_multiplicative_on_numeric_matrices():
    rng = random.Random(9)
    for _ in range(10):
        a = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        b = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
        ab = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        assert rat_det(ab) == rat_det(a) * rat_det(b)


def test_pfaffian_squares_to_det():
    rng = random.Random(4)
    for n in (2, 4, 6):
        for _ in range(5):
            m = rand_skew(rng, n, max_deg=1, terms=2)
            pf = pfaffian(m)
            assert pf * pf == det_bareiss(m)


def test_pfaffian_known_values():
    a12 = MultiPoly.parse(VARS, "x")
    b = MultiPoly.parse(VARS, "y + 1")
    zero = MultiPoly.zero(VARS)
    m = PolyMatrix([[zero, a12], [-a12, zero]])
    assert pfaffian(m) == a12
    m4 = PolyMatrix(
        [
            [zero, a12, zero, zero],
            [-a12, zero, zero, zero],
            [zero, zero, zero, b],
            [zero, zero, -b, zero],
        ]
    )
    assert pfaffian(m4) == a12 * b


def test_pfaffian_odd_dimension_rejected():
    zero = MultiPoly.zero(VARS)
    with pytest.raises(ValueError):
        pfaffian(PolyMatrix([[zero]]))


def test_pfaffian_adjugate_identity():
    rng = random.Random(8)
    for n in (2, 4, 6):
        m = rand_skew(rng, n, max_deg=1, terms=2)
        adj, pf = pfaffian_adjugate(m)
        assert pf == pfaffian(m)
        for i in range(n):
            for j in range(n):
                acc = MultiPoly.zero(VARS)
                for k in range(n):
                    acc = acc + m.at(i, k) * adj.at(k, j)
                assert acc == (pf if i == j else MultiPoly.zero(VARS))


def test_inverse_skew_at_points():
    rng = random.Random(6)
    m = rand_skew(rng, 4, max_deg=1, terms=2)
    inv = inverse_skew(m)
    pf = pfaffian(m)
    for point in ((Fraction(1), Fraction(2)), (Fraction(-3), Fraction(1, 2))):
        if pf.eval(point) == 0:
            continue
        vals = [[m.at(i, j).eval(point) for j in range(4)] for i in range(4)]
        inv_vals = [[inv[i][j].eval(point) for j in range(4)] for i in range(4)]
        for i in range(4):
            for j in range(4):
                s = sum(vals[i][k] * inv_vals[k][j] for k in range(4))
                assert s == (1 if i == j else 0)


def test_poly_rank():
    x = MultiPoly.variable(VARS, "x")
    zero = MultiPoly.zero(VARS)
    m = PolyMatrix([[x, x], [x, x]])
    assert poly_rank(m) == 1
    m2 = PolyMatrix([[x, zero], [zero, x * x]])
    assert poly_rank(m2) == 2


def test_rat_inverse_and_rank():
    rng = random.Random(12)
    for _ in range(10):
        n = rng.choice((2, 3, 4))
        m = [[Fraction(rng.randint(-6, 6)) for _ in range(n)] for _ in range(n)]
        if rat_det(m) == 0:
            assert rat_rank(m) < n
            continue
        inv = rat_inverse(m)
        for i in range(n):
            for j in range(n):
                s = sum(m[i][k] * inv[k][j] for k in range(n))
                assert s == (1 if i == j else 0)
        assert rat_rank(m) == n


def test_rat_kernel():
    m = [
        [Fraction(1), Fraction(2), Fraction(3)],
        [Fraction(2), Fraction(4), Fraction(6)],
        [Fraction(0), Fraction(0), Fraction(0)],
    ]
    basis = rat_kernel(m)
    assert len(basis) == 2
    for vec in basis:
        for row in m:
            assert sum(row[i] * vec[i] for i in range(3)) == 0
