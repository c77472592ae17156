import itertools
import random
from fractions import Fraction

import pytest

from hho2.threeform import (
    LinearMapN1,
    ThreeForm,
    chart_restrict,
    congruence_system,
    embed,
    pullback,
)


def rand_form(rng, dim, entries=4, bound=5):
    coeffs = {}
    for _ in range(entries):
        idx = tuple(sorted(rng.sample(range(dim), 3)))
        coeffs[idx] = Fraction(rng.randint(-bound, bound))
    return ThreeForm(dim, {k: v for k, v in coeffs.items() if v})


def perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def full_coeff(form, i, j, k):
    """Value of the fully skew coefficient array at an arbitrary index triple."""
    if len({i, j, k}) < 3:
        return Fraction(0)
    base = tuple(sorted((i, j, k)))
    value = form.coeffs.get(base, Fraction(0))
    order = {v: n for n, v in enumerate(base)}
    return perm_sign((order[i], order[j], order[k])) * value


def pullback_oracle(form, a):
    """Direct triple-sum transformation: w'_{lmn} = w_{abc} A^a_l A^b_m A^c_n."""
    d = form.dim
    rows = a.entries
    out = {}
    for tri in itertools.combinations(range(d), 3):
        acc = Fraction(0)
        for abc in itertools.product(range(d), repeat=3):
            w = full_coeff(form, *abc)
            if w:
                acc += w * rows[abc[0]][tri[0]] * rows[abc[1]][tri[1]] * rows[abc[2]][tri[2]]
        if acc:
            out[tri] = acc
    return ThreeForm(d, out)


def test_pullback_matches_brute_force_oracle():
    rng = random.Random(21)
    for dim in (3, 5, 7):
        for _ in range(4):
            form = rand_form(rng, dim)
            a = LinearMapN1.random_sl(dim, rng)
            assert pullback(form, a) == pullback_oracle(form, a)


def test_pullback_functorial():
    rng = random.Random(33)
    dim = 5
    form = rand_form(rng, dim)
    a = LinearMapN1.random_sl(dim, rng)
    b = LinearMapN1.random_sl(dim, rng)
    assert pullback(pullback(form, a), b) == pullback(form, a.compose(b))


def test_pullback_identity():
    rng = random.Random(1)
    form = rand_form(rng, 7)
    assert pullback(form, LinearMapN1.identity(7)) == form


def test_random_sl_is_unimodular():
    rng = random.Random(10)
    for dim in (3, 5, 7, 9):
        for _ in range(5):
            a = LinearMapN1.random_sl(dim, rng)
            assert a.is_sl
            inv = a.inverse()
            assert a.compose(inv) == LinearMapN1.identity(dim)


def test_linear_map_requires_invertible():
    with pytest.raises(ValueError):
        LinearMapN1([[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        LinearMapN1([[1, 0], [1]])


def test_chart_restrict_embed_round_trip():
    rng = random.Random(7)
    for n in (2, 4, 6, 8):
        form = rand_form(rng, n + 1, entries=6)
        t3, g0 = chart_restrict(form)
        assert embed(t3, g0, n) == form
        form2 = embed(t3, g0, n)
        t3b, g0b = chart_restrict(form2)
        assert t3b == t3
        assert g0b == g0


def test_form_json_round_trip():
    rng = random.Random(14)
    form = rand_form(rng, 7, entries=5)
    again = ThreeForm.from_json(form.to_json())
    assert again == form


def test_form_json_rejects_bad_triples():
    with pytest.raises(ValueError):
        ThreeForm.from_json('{"dim": 5, "coeffs": [[2, 1, 3, "1"]]}')
    with pytest.raises(ValueError):
        ThreeForm.from_json('{"dim": 5, "coeffs": [[1, 1, 3, "1"]]}')
    with pytest.raises(ValueError):
        ThreeForm.from_json('{"dim": 5, "coeffs": [[1, 2, 9, "1"]]}')


def test_form_algebra():
    rng = random.Random(2)
    a = rand_form(rng, 5)
    b = rand_form(rng, 5)
    s = a + b
    for idx in set(a.coeffs) | set(b.coeffs):
        assert s.value(*idx) == a.value(*idx) + b.value(*idx)
    doubled = a.scale(Fraction(2))
    for idx, v in a.coeffs.items():
        assert doubled.value(*idx) == 2 * v


def test_congruence_system_solution_dims():
    # A full-rank example: the nondegenerate n=6 open-orbit form has a
    # congruence of lines cut out by rank dim-2 conditions.
    coeffs = {
        (0, 1, 2): Fraction(1, 3),
        (3, 4, 5): Fraction(1, 3),
        (0, 3, 6): Fraction(1, 3),
        (1, 4, 6): Fraction(1, 3),
        (2, 5, 6): Fraction(1, 3),
    }
    form = ThreeForm(7, coeffs)
    system = congruence_system(form)
    assert system.solution_dim() == len(system.pairs) - system.rank()
    assert system.rank() >= 1
