import random

import pytest
from hypothesis import given, strategies as st

from ewtopos import lam
from ewtopos.gen import random_lambda
from ewtopos.lam import Const, LApp, Lam, OApp, Var, bracket_abstract, compile_lambda
from ewtopos.pca import STANDARD, apply
from ewtopos.refeval import Agreement, evaluate
from ewtopos.syntax import ParseError, parse_term, pretty, term
from ewtopos.terms import K, S, Oracle

from strategies import sk_terms


def test_bracket_rules():
    assert bracket_abstract("x", Var("x")) == S(K, K)
    assert bracket_abstract("x", K) == K(K)
    assert bracket_abstract("x", OApp(Var("x"), Var("x"))) == S(S(K, K), S(K, K))


def test_compile_identity():
    assert compile_lambda(Lam("x", Var("x"))) == S(K, K)


def test_compiled_first_projection_behaves_as_k():
    k2 = compile_lambda(Lam("x", Lam("y", Var("x"))))
    assert STANDARD.apply(k2, S, K).term == S
    assert evaluate(Lam("x", Lam("y", Var("x"))), (S, K)) == S


def test_compiled_second_projection_on_a_pair():
    e = Lam("x", LApp(Const(lam.P2), Var("x")))
    assert apply(compile_lambda(e), lam.pair(K, S)).term == S
    assert evaluate(e, (lam.pair(K, S),)) == S


def test_case_agrees_with_evaluator():
    e = lam.lams("bxy", lam.lapp(Var("b"), Var("x"), Var("y")))
    assert evaluate(e, (lam.TRUE, S, K)) == S
    assert STANDARD.apply(lam.CASE, lam.TRUE, S, K).term == S


def test_unbound_variable():
    with pytest.raises(lam.UnboundVariable):
        compile_lambda(LApp(Var("x"), Const(K)))


def test_combinator_lookup():
    assert lam.combinator("p1") == lam.P1
    with pytest.raises(KeyError):
        lam.combinator("nope")


def test_surface_syntax():
    assert parse_term("\\x. x") == S(K, K)
    assert STANDARD.reduce(parse_term("<K, S>")).term == lam.pair(K, S)
    assert STANDARD.reduce(parse_term("num:2")).term == lam.numeral(2)
    assert parse_term("#f K") == Oracle("f")(K)
    with pytest.raises(ParseError) as err:
        parse_term("K )")
    assert err.value.line == 1 and err.value.col == 3


def test_trailing_lambda_extends_right():
    assert term("K \\x. x") == K(S(K, K))


@given(sk_terms(6))
def test_pretty_printing_round_trips(t):
    assert parse_term(pretty(t)) == t


@given(st.sampled_from([lam.pair(K, lam.numeral(3)), lam.numeral(5), lam.P1, lam.CASE]))
def test_pretty_printing_round_trips_on_sugar(t):
    # pair sugar parses to an application of PAIR, so equality is up to normalisation
    assert STANDARD.reduce(parse_term(pretty(t))).term == t


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_compiled_terms_agree_with_evaluator(seed, nargs):
    rng = random.Random(seed)
    e = random_lambda(rng, depth=rng.randint(1, 5))
    args = tuple(rng.choice([K, S, lam.I, lam.pair(K, S)]) for _ in range(nargs))
    assert Agreement(STANDARD).check(e, args)
    expected = evaluate(e, args)
    if expected is not None:
        assert STANDARD.reduce(compile_lambda(e)(*args)).term == expected


def test_agreement_detects_a_wrong_compilation():
    e = Lam("x", Lam("y", Var("x")))
    assert not Agreement(STANDARD).check(e, (), compiled=lam.FALSE)
