import json
import random
from fractions import Fraction

import pytest

from hho2.catalog import build, list_entries
from hho2.operators import (
    Hho2,
    ProjReciprocal,
    conformal_check,
    conformal_determinant_check,
    extend_tensor,
    split_extended,
    transform,
    validate,
)
from hho2.poly import MultiPoly
from hho2.threeform import LinearMapN1
from hho2.diagnostics import sample_points


def simple_n4():
    return Hho2(4, {(0, 1, 2): Fraction(1)}, {(0, 3): Fraction(1)})


def test_metric_layout():
    op = simple_n4()
    g = op.metric()
    u = ("u1", "u2", "u3", "u4")
    assert g.at(0, 1) == MultiPoly.parse(u, "u3")
    assert g.at(0, 2) == MultiPoly.parse(u, "-u2")
    assert g.at(1, 2) == MultiPoly.parse(u, "u1")
    assert g.at(0, 3) == MultiPoly.parse(u, "1")
    for i in range(4):
        assert g.at(i, i).is_zero()
        for j in range(4):
            assert g.at(i, j) == -g.at(j, i)


def test_pfaffian_of_simple_n4():
    op = simple_n4()
    assert str(op.pfaffian_poly()) == "u1"
    assert not op.is_degenerate


def test_g0_dict_and_matrix_inputs_agree():
    a = Hho2(4, {}, {(0, 1): Fraction(2), (2, 3): Fraction(-1)})
    rows = [
        [0, 2, 0, 0],
        [-2, 0, 0, 0],
        [0, 0, 0, -1],
        [0, 0, 1, 0],
    ]
    b = Hho2(4, {}, rows)
    assert a == b


def test_from_raw_tensor_requires_full_skewness():
    entries = [
        (0, 1, 2, Fraction(1)),
        (1, 0, 2, Fraction(-1)),
        (0, 2, 1, Fraction(-1)),
        (2, 0, 1, Fraction(1)),
        (1, 2, 0, Fraction(1)),
        (2, 1, 0, Fraction(-1)),
    ]
    op = Hho2.from_raw_tensor(4, entries, {})
    assert op.t_value(0, 1, 2) == 1
    bad = entries + [(1, 0, 2, Fraction(1))]
    with pytest.raises(ValueError):
        Hho2.from_raw_tensor(4, bad, {})
    with pytest.raises(ValueError):
        Hho2.from_raw_tensor(4, [(0, 0, 1, Fraction(2))], {})


def test_t_value_signs():
    op = simple_n4()
    assert op.t_value(0, 1, 2) == 1
    assert op.t_value(1, 0, 2) == -1
    assert op.t_value(2, 0, 1) == 1
    assert op.t_value(0, 0, 2) == 0
    assert op.t_value(1, 2, 3) == 0


def test_validate_reports():
    rep = validate(simple_n4())
    assert rep.ok
    assert not rep.degenerate
    rep2 = validate(build("n4-degenerate"))
    assert rep2.ok
    assert rep2.degenerate


def test_json_round_trip_all_catalog():
    for entry in list_entries():
        if entry.params:
            values = {name: Fraction(k + 2) for k, name in enumerate(entry.params)}
            op = entry.build(values)
        else:
            op = entry.build()
        again = Hho2.from_json(op.to_json())
        assert again == op


def test_json_rejects_malformed():
    with pytest.raises(ValueError):
        Hho2.from_json('{"n": 4, "T": [[1, 1, 2, "1"]], "g0": []}')
    with pytest.raises(ValueError):
        Hho2.from_json('{"n": 4, "T": [], "g0": [[2, 1, "1"]]}')
    with pytest.raises(ValueError):
        Hho2.from_json('{"n": 3, "T": [], "g0": []}')


def test_extend_split_round_trip():
    op = simple_n4()
    ext = extend_tensor(op)
    assert ext[(0, 1, 2)] == Fraction(1)
    assert ext[(0, 3, 4)] == Fraction(1)
    t3, g0 = split_extended(ext, 4)
    assert t3 == op.t3
    assert g0 == {(0, 3): Fraction(1)}


def test_transform_identity_is_identity():
    for name in ("n2", "n4-open", "n6-X"):
        op = build(name)
        moved = transform(op, ProjReciprocal.identity(op.n))
        assert moved == op


def test_transform_composition():
    rng = random.Random(3)
    op = build("n4-open")
    a = LinearMapN1.random_sl(5, rng)
    b = LinearMapN1.random_sl(5, rng)
    once = transform(transform(op, ProjReciprocal(a)), ProjReciprocal(b))
    both = transform(op, ProjReciprocal(b.compose(a)))
    assert once == both


def test_transform_preserves_validity_and_degeneracy_split():
    rng = random.Random(15)
    for name in ("n2", "n4-open", "n4-degenerate", "n6-IX"):
        op = build(name)
        a = LinearMapN1.random_sl(op.n + 1, rng)
        moved = transform(op, ProjReciprocal(a))
        rep = validate(moved)
        assert rep.ok
        assert rep.degenerate == op.is_degenerate


def test_conformal_identities_hold_at_points():
    rng = random.Random(77)
    for name in ("n2", "n4-open", "n6-X", "n6-VII"):
        op = build(name)
        a = LinearMapN1.random_sl(op.n + 1, rng)
        r = ProjReciprocal(a)
        done = 0
        while done < 5:
            u = sample_points(op, 1, rng, bound=9, allow_degenerate=True)[0]
            if not r.affine_factor(u):
                continue
            assert conformal_check(op, r, u)
            assert conformal_determinant_check(op, r, u)
            done += 1


def test_conformal_identity_has_teeth():
    # Inline the identity with a deliberately wrong source metric and make
    # sure the comparison actually fails somewhere.
    rng = random.Random(78)
    op = build("n4-open")
    wrong = Hho2(4, {(0, 1, 2): Fraction(1)}, op.g0)
    a = LinearMapN1.random_sl(5, rng)
    r = ProjReciprocal(a)
    moved = transform(op, r)
    violations = 0
    done = 0
    while done < 5:
        u = sample_points(op, 1, rng, bound=9, allow_degenerate=True)[0]
        A = r.affine_factor(u)
        if not A:
            continue
        done += 1
        ut = r.chart(u)
        J = r.jacobian(u)
        gt = moved.metric_at(ut)
        g = wrong.metric_at(u)
        scale = Fraction(1) / (A ** 3)
        ok = True
        for i in range(4):
            for j in range(4):
                lhs = sum(J[k][i] * sum(gt[k][l] * J[l][j] for l in range(4)) for k in range(4))
                if lhs != scale * g[i][j]:
                    ok = False
        if not ok:
            violations += 1
    assert violations > 0


def test_instantiate_and_is_numeric():
    entry_op = build("n8-fam1", {
        "lambda1": Fraction(1),
        "lambda2": Fraction(2),
        "lambda3": Fraction(3),
        "lambda4": Fraction(5),
    })
    assert entry_op.is_numeric()
    assert not entry_op.is_degenerate
    with pytest.raises(ValueError):
        build("n8-fam1", {"lambda1": Fraction(1)})


def test_metric_at_matches_symbolic_eval():
    rng = random.Random(5)
    op = build("n6-VIII")
    g = op.metric()
    for _ in range(5):
        u = tuple(Fraction(rng.randint(-6, 6)) for _ in range(6))
        vals = op.metric_at(u)
        for i in range(6):
            for j in range(6):
                assert vals[i][j] == g.at(i, j).eval(u)
