import random

import pytest

from tilelogic.game import GameInstance, TileType, WHITE
from tilelogic.logic import (
    And, Future, Iff, Implies, KripkeFrame, KripkeModel, Not, Or, Past, TRUE,
    Var, collect_props, conj, formula_size, holds, print_formula,
)
from tilelogic.reduction import (
    CONDITION_IDS, IndexDepth, PropSpace, ReductionParams, beta, beta_any,
    box, branching_factor, bump, compile_instance, condition, counter_equals,
    diamond, universally,
)

from helpers import all_white_tile, instance_a, random_formula, random_model


def make_space(n=1, s=0):
    tiles = tuple(all_white_tile(f"T{k}") for k in range(s + 2))
    inst = GameInstance(tiles, tuple(["T0"] * n))
    params = ReductionParams.for_instance(inst)
    return inst, params, PropSpace(inst, params)


def test_branching_factor():
    assert branching_factor(0) == 3
    assert branching_factor(6) == 3
    assert branching_factor(7) == 4
    with pytest.raises(ValueError):
        branching_factor(-1)


def test_params_bit_length_envelope():
    for n in (1, 2, 3):
        for s in (0, 1, 2, 5):
            tiles = tuple(all_white_tile(f"T{k}") for k in range(s + 2))
            inst = GameInstance(tiles, tuple(["T0"] * n))
            p = ReductionParams.for_instance(inst)
            assert p.N == 2 * n * (s + 2) ** n
            assert 2 ** (p.L - 1) <= p.N <= 2 ** p.L - 1


def test_bump_cases():
    assert bump(IndexDepth(1, 0), 2, 3) == (1, 1)
    assert bump(IndexDepth(1, 2), 2, 3) == (2, 0)
    assert bump(IndexDepth(2, 2), 2, 3) == (1, 0)
    with pytest.raises(ValueError):
        bump(IndexDepth(3, 0), 2, 3)


def test_bump_single_cycle_no_two_step_fixpoint():
    for n, b in ((1, 3), (2, 3), (3, 4)):
        domain = [IndexDepth(i, j) for i in range(1, n + 1) for j in range(b)]
        seen = []
        cur = IndexDepth(1, 0)
        for _ in range(n * b):
            seen.append(cur)
            cur = bump(cur, n, b)
        assert cur == IndexDepth(1, 0)
        assert sorted(seen) == sorted(domain)  # a single cycle hits everything
        for id_ in domain:
            assert bump(bump(id_, n, b), n, b) != id_


def test_beta_shapes():
    _, _, space1 = make_space(n=1)
    assert beta(space1, IndexDepth(1, 0)) is And(Var("index1"), Var("depth0"))
    assert beta_any(space1) is Var("index1")
    _, _, space2 = make_space(n=2)
    assert beta_any(space2) is Or(Var("index1"), Var("index2"))


def test_diamond_disjunct_count_and_shape():
    _, params, space = make_space(n=1, s=0)
    d = diamond(space, params, TRUE)
    disjuncts = []
    cur = d
    while isinstance(cur, Or):
        disjuncts.append(cur.right)
        cur = cur.left
    disjuncts.append(cur)
    assert len(disjuncts) == params.n * params.b == 3
    for part in disjuncts:
        assert isinstance(part, And)
        future = part.right
        assert isinstance(future, Future)
        inner = future.child
        assert isinstance(inner, And)
        assert isinstance(inner.left, Past)
        assert print_formula(inner.right) == "(H (not (var f)))"


def test_box_diamond_duality_on_random_models():
    _, params, space = make_space(n=1, s=0)
    props = tuple(sorted(space.all_names()))
    rng = random.Random(23)
    for _ in range(80):
        m = random_model(rng, max_points=5, props=props)
        phi = random_formula(rng, props=props, depth=2)
        lhs = holds(m, box(space, params, phi))
        rhs = holds(m, Not(diamond(space, params, Not(phi))))
        assert lhs == rhs


def test_condition_one_shape():
    inst, params, space = make_space(n=1, s=0)
    got = condition(1, inst, space, params)
    want = conj([Var("eloise"), Var("index1"), Var("depth0"),
                 Var("col0_T0"), Var("col1_T0"), Var("col2_T0")])
    assert got is want


def test_condition_fourteen_is_win():
    inst, params, space = make_space()
    assert condition(14, inst, space, params) is Var("win")


def test_condition_sixteen_descending():
    inst, params, space = make_space(n=1, s=0)
    assert params.L == 3
    want = conj([Not(Var("q3")), Not(Var("q2")), Not(Var("q1"))])
    assert condition(16, inst, space, params) is want


def test_counter_equals():
    inst, params, space = make_space(n=1, s=0)
    assert params.L == 3
    assert counter_equals(space, params, 0) is conj(
        [Not(Var("q1")), Not(Var("q2")), Not(Var("q3"))])
    assert counter_equals(space, params, 4) is conj(
        [Not(Var("q1")), Not(Var("q2")), Var("q3")])
    with pytest.raises(ValueError):
        counter_equals(space, params, 8)


def test_counter_equals_wider():
    inst, params, space = make_space(n=2, s=0)
    assert params.L == 5
    want = conj([Not(Var("q1")), Not(Var("q2")), Not(Var("q3")),
                 Not(Var("q4")), Var("q5")])
    assert counter_equals(space, params, 16) is want


def test_condition_thirteen_empty_for_width_one():
    inst, params, space = make_space(n=1, s=0)
    assert condition(13, inst, space, params) is TRUE


def test_strict_abelard_extends_to_last_column():
    inst, params, space = make_space(n=2, s=0)
    plain = condition(13, inst, space, params)
    strict = condition(13, inst, space, params, strict_abelard=True)
    assert formula_size(strict) > formula_size(plain)


def test_compile_deterministic():
    inst = instance_a()
    a = print_formula(compile_instance(inst))
    b = print_formula(compile_instance(inst))
    assert a == b


def test_compile_props_stay_in_space():
    for n, s in ((1, 0), (1, 1), (2, 0)):
        inst, params, space = make_space(n=n, s=s)
        phi = compile_instance(inst)
        assert collect_props(phi) <= space.all_names()


def test_prop_space_tokens_distinct():
    inst, params, space = make_space(n=2, s=1)
    names = space.all_names()
    expected = (3 + params.n + params.b
                + (params.n + 2) * (params.s + 2) + params.L)
    assert len(names) == expected


def test_universal_prefix_shape():
    phi = universally(Var("p"))
    assert print_formula(phi) == "(G (H (var p)))"
