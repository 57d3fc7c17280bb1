import random

import pytest

from tilelogic.logic import (
    And, AlwaysFuture, AlwaysPast, FALSE, FormulaSyntaxError, Future, Iff,
    Implies, KripkeFrame, KripkeModel, Not, Or, Past, TRUE, Var,
    collect_props, conj, disj, format_model, formula_size, holds, holds_at,
    is_confluent, is_transitive, normalize, parse_formula, parse_model,
    print_formula,
)

from helpers import eval_at, eval_everywhere, random_formula, random_model


def chain_model():
    frame = KripkeFrame(["a", "b"], [("a", "b")])
    return KripkeModel(frame, {"p": {"b"}})


def test_future_needs_a_successor():
    m = KripkeModel(KripkeFrame(["x"], []), {})
    assert holds(m, Future(TRUE)) == frozenset()


def test_chain_future_and_past():
    m = chain_model()
    assert holds(m, Future(Var("p"))) == {"a"}
    assert holds(m, Past(Var("p"))) == frozenset()


def test_holds_at_matches_holds():
    m = chain_model()
    assert holds_at(m, Future(Var("p")), "a")
    assert not holds_at(m, Future(Var("p")), "b")
    phi = Not(Future(Var("p")))
    for x in m.frame.points:
        assert holds_at(m, phi, x) == (not holds_at(m, Future(Var("p")), x))


def test_holds_at_unknown_point():
    m = chain_model()
    with pytest.raises(ValueError):
        holds_at(m, TRUE, "zz")


def test_holds_agrees_with_reference_evaluator():
    rng = random.Random(7)
    for _ in range(300):
        m = random_model(rng)
        phi = random_formula(rng)
        assert holds(m, phi) == eval_everywhere(m, phi)


def test_duality_and_monotonicity():
    rng = random.Random(11)
    for _ in range(120):
        m = random_model(rng)
        phi = random_formula(rng, depth=3)
        psi = random_formula(rng, depth=3)
        assert holds(m, AlwaysFuture(phi)) == holds(m, Not(Future(Not(phi))))
        assert holds(m, AlwaysPast(phi)) == holds(m, Not(Past(Not(phi))))
        assert holds(m, And(phi, psi)) == holds(m, phi) & holds(m, psi)
        assert holds(m, Or(phi, psi)) == holds(m, phi) | holds(m, psi)


def test_normalize_preserves_semantics():
    rng = random.Random(13)
    for _ in range(150):
        m = random_model(rng)
        phi = random_formula(rng)
        assert holds(m, normalize(phi)) == holds(m, phi)


def test_structural_sharing_is_harmless():
    m = chain_model()
    one = And(Future(Var("p")), Future(Var("p")))
    again = And(Future(Var("p")), Future(Var("p")))
    assert one is again
    assert holds(m, one) == holds(m, again)


def test_frame_validates_edges():
    with pytest.raises(ValueError):
        KripkeFrame(["a"], [("a", "b")])


def test_transitive_and_confluent_basics():
    empty = KripkeFrame(["a", "b", "c"], [])
    assert is_transitive(empty) and is_confluent(empty)
    cycle = KripkeFrame(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    assert not is_transitive(cycle)
    diamond = KripkeFrame(
        ["a", "b", "c", "d"],
        [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("a", "d")],
    )
    assert is_transitive(diamond)
    assert not is_confluent(diamond)  # d itself has no upper bound
    with_top = KripkeFrame(
        ["a", "b", "c", "d"],
        [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("a", "d"), ("d", "d"),
         ("b", "b"), ("c", "c"), ("a", "a")],
    )
    assert is_transitive(with_top) and is_confluent(with_top)


def test_parse_print_round_trip_examples():
    assert parse_formula("(F (var p))") is Future(Var("p"))
    assert parse_formula("(and (var p) (not (var q)))") is And(Var("p"), Not(Var("q")))
    assert parse_formula("true") is TRUE and parse_formula("false") is FALSE
    assert print_formula(Iff(Var("a"), Implies(Var("b"), FALSE))) == \
        "(iff (var a) (implies (var b) false))"


def test_parse_print_round_trip_random():
    rng = random.Random(5)
    for _ in range(200):
        phi = random_formula(rng, depth=5)
        assert parse_formula(print_formula(phi)) is phi


def test_parse_errors_carry_positions():
    for text in ["(and (var p))", "(var p) junk", "(wat (var p))", "((var p))", "(F (var p)"]:
        with pytest.raises(FormulaSyntaxError) as err:
            parse_formula(text)
        assert err.value.position >= 0


def test_formula_size():
    assert formula_size(Var("p")) == 1
    assert formula_size(Future(Var("p"))) == 2
    a, b = Future(Var("p")), Var("q")
    assert formula_size(And(a, b)) == 1 + formula_size(a) + formula_size(b)
    shared = And(a, a)
    assert formula_size(shared) == 1 + 2 * formula_size(a)


def test_conj_disj_conventions():
    assert conj([]) is TRUE
    assert disj([]) is FALSE
    assert conj([Var("p")]) is Var("p")
    assert disj([Var("p"), Var("q")]) is Or(Var("p"), Var("q"))


def test_collect_props():
    phi = And(Var("p"), Future(Or(Var("q"), Not(Var("p")))))
    assert collect_props(phi) == {"p", "q"}


def test_model_text_round_trip():
    m = KripkeModel(
        KripkeFrame(["a", "b", "c"], [("a", "b"), ("b", "c")]),
        {"p": {"a", "c"}, "q": {"b"}},
    )
    text = format_model(m)
    back = parse_model(text)
    assert back.frame.points == m.frame.points
    assert back.frame.rel == m.frame.rel
    assert back.valuation == m.valuation


def test_model_parser_rejects_nonsense():
    with pytest.raises(ValueError):
        parse_model("point a\nedge a b\n")
    with pytest.raises(ValueError):
        parse_model("blah\n")
