from hypothesis import given, strategies as st

from ewtopos import lam
from ewtopos.pca import (CONVERGED, EXHAUSTED, STUCK, Pca, STANDARD, apply, in_subpca, reduce,
                         set_oplus, set_otimes)
from ewtopos.syntax import term
from ewtopos.terms import K, S, App, Oracle

from strategies import sk_terms

I = lam.I
OMEGA = App(S(I, I), S(I, I))


def test_k_discards_second_argument():
    out = reduce(K(K, S), 10)
    assert out.kind == CONVERGED and out.term == K


def test_skk_is_identity():
    out = reduce(S(K, K, S), 10)
    assert out.converged and out.term == S and out.steps == 2


def test_omega_runs_out_of_fuel():
    out = reduce(OMEGA, 100)
    assert out.kind == EXHAUSTED and out.steps == 100


def test_apply_examples():
    assert apply(K, S, 10).term == K(S)
    assert apply(S, K, 10).term == S(K)
    f = Oracle("f")
    assert apply(I, f, 10).term == f


def test_oracle_tables():
    pca = Pca.with_oracles({"f": {0: 1, 1: 3}})
    f = Oracle("f")
    assert pca.apply(f, lam.numeral(1)).term == lam.numeral(3)
    assert pca.apply(f, lam.numeral(2)).kind == STUCK
    assert pca.apply(f, K).kind == STUCK
    # without a table the oracle is stuck on everything
    assert STANDARD.apply(f, lam.numeral(0)).stuck


def test_pairing_laws_on_examples():
    p = lam.pair(K, S)
    assert apply(lam.P1, p).term == K
    assert apply(lam.P2, p).term == S
    assert STANDARD.apply(lam.CASE, lam.TRUE, S, K).term == S
    assert STANDARD.apply(lam.CASE, lam.FALSE, S, K).term == K


def test_pair_is_the_normal_form_of_pair_application():
    assert STANDARD.apply(lam.PAIR, K, S).term == lam.pair(K, S)


def test_numerals():
    assert lam.decode_numeral(lam.numeral(0)) == 0
    assert lam.decode_numeral(lam.numeral(3)) == 3
    assert lam.decode_numeral(K) is None


def test_set_products():
    assert set_otimes({K}, {S}) == {lam.pair(K, S)}
    assert set_oplus(set(), set()) == frozenset()
    assert set_oplus({K}, {S}) == {lam.pair(lam.TRUE, K), lam.pair(lam.FALSE, S)}


def test_subpca_membership():
    assert in_subpca(S(K, K))
    assert not in_subpca(Oracle("f"))
    assert not in_subpca(K(Oracle("g")(K)))


def test_negative_fuel_is_rejected():
    import pytest
    with pytest.raises(ValueError):
        STANDARD.reduce(K, -1)


SAMPLE = [K, S, I, lam.TRUE, lam.FALSE, lam.P1, lam.P2, lam.CASE, lam.PAIR, K(K), K(S), S(K),
          S(S), lam.numeral(0), lam.numeral(1), lam.numeral(4), lam.pair(K, S), term("\\x. <x, x>"),
          term("\\x y. y x"), S(K(S), K)]


def test_pairing_and_case_laws_on_sample():
    assert len(SAMPLE) == 20
    for a in SAMPLE:
        for b in SAMPLE:
            p = lam.pair(a, b)
            assert apply(lam.P1, p).term == a
            assert apply(lam.P2, p).term == b
            assert STANDARD.apply(lam.CASE, lam.TRUE, a, b).term == a
            assert STANDARD.apply(lam.CASE, lam.FALSE, a, b).term == b


@given(sk_terms(), sk_terms())
def test_k_axiom(a, b):
    va = reduce(a)
    out = reduce(K(a, b))
    if va.converged:
        assert out.converged and out.term == va.term


@given(sk_terms(), sk_terms())
def test_s_with_two_arguments_converges(a, b):
    if reduce(a).converged and reduce(b).converged:
        assert reduce(S(a, b)).converged


@given(sk_terms(), sk_terms(), sk_terms())
def test_s_axiom(a, b, c):
    lhs = reduce(S(a, b, c), 2000)
    rhs = reduce(App(App(a, c), App(b, c)), 2000)
    if lhs.converged and rhs.converged:
        assert lhs.term == rhs.term


@given(sk_terms(5), st.integers(0, 300))
def test_reduction_is_deterministic(t, fuel):
    assert reduce(t, fuel) == Pca().reduce(t, fuel)


@given(sk_terms(5), st.integers(0, 200), st.integers(0, 200))
def test_converged_results_are_stable_in_fuel(t, n, extra):
    out = reduce(t, n)
    if out.converged:
        assert reduce(t, n + extra) == out
    assert out.steps <= n


@given(sk_terms(), sk_terms())
def test_subpca_is_closed_under_application(a, b):
    out = apply(a, b, 1000)
    if out.converged:
        assert in_subpca(out.term)
