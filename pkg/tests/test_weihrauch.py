from hypothesis import assume, given, strategies as st

from ewtopos import lam, sample
from ewtopos.assemblies import Morphism, PartitionedAssembly, terminal
from ewtopos.degrees import (degree, from_fibre, reducible, to_fibre, witness_from_fibre,
                             witness_to_fibre)
from ewtopos.instance import IRPredicate, iR_bottom, iR_leq, iR_reindex, iR_top, search_iR
from ewtopos.syntax import term
from ewtopos.terms import K, S, Oracle
from ewtopos.weihrauch import (FG_COUNIT, FG_UNIT, FG_UNIT_LITERAL, NATURALITY, REFLEXIVITY, EWPredicate,
                               EWWitness, F_monotone, F_monotone_literal, G_monotone, eW_bottom,
                               eW_meet, eW_reindex, eW_top, leq_extW, obstruction, restrict,
                               roundtrip_witnesses, search_extW, to_eW, to_iR, transitivity)

from strategies import rngs

POINT = PartitionedAssembly([("x", K)])


def two_fibre():
    Y = PartitionedAssembly([("y1", K), ("y2", S)])
    f = Morphism(Y, POINT, {"y1": "x", "y2": "x"}, term("\\v. K"))
    return IRPredicate(f, {"y1": [K], "y2": [S]})


def test_reflexivity_example():
    g = EWPredicate(POINT, {("x", K): [[S], [K, S]], ("x", S): [[]]})
    assert REFLEXIVITY == EWWitness(term("\\x. p2 x"), lam.P2)
    assert leq_extW(g, g, REFLEXIVITY).holds


def test_empty_support_is_below_everything():
    empty = EWPredicate(POINT, {})
    g = EWPredicate(POINT, {("x", K): [[S]]})
    for w in (REFLEXIVITY, EWWitness(K, K), EWWitness(S, lam.I)):
        assert leq_extW(empty, g, w).holds
    assert leq_extW(empty, g, EWWitness(Oracle("f"), lam.I)).fails


def test_empty_solution_set_semantics():
    f = EWPredicate(POINT, {("x", K): [[]]})
    g = EWPredicate(POINT, {("x", K): [[S]]})
    assert leq_extW(f, g, REFLEXIVITY).fails
    h = EWPredicate(POINT, {("x", K): [[]]})
    assert leq_extW(f, h, REFLEXIVITY).holds
    assert obstruction(f, g).fails


def test_target_outside_support_fails_and_divergence_is_unknown():
    f = EWPredicate(POINT, {("x", K): [[S]]})
    g = EWPredicate(POINT, {("x", S): [[S]]})
    assert leq_extW(f, g, REFLEXIVITY).fails
    omega = term("(\\x. x x) (\\x. x x)")
    assert leq_extW(f, g, EWWitness(K(omega), lam.P2), fuel=300).unknown


def test_reindexing_tags_with_the_source_name():
    X2 = PartitionedAssembly([("a", K), ("b", S)])
    g = EWPredicate(POINT, {("x", S): [[K]]})
    h = Morphism(X2, POINT, {"a": "x", "b": "x"}, term("\\v. K"))
    r = eW_reindex(h, g)
    assert r("a", lam.pair(K, S)) == {frozenset([K])}
    assert r("b", lam.pair(S, S)) == {frozenset([K])}
    assert r("a", S) == frozenset()
    assert restrict(g)("x", lam.pair(K, S)) == {frozenset([K])}


def test_F_examples():
    Fp = to_eW(two_fibre())
    assert Fp("x", K) == {frozenset([K])}
    assert Fp("x", S) == {frozenset([S])}
    assert len(to_eW(iR_bottom(POINT))) == 0
    X2 = PartitionedAssembly([("a", K), ("b", S)])
    top = to_eW(iR_top(X2))
    assert top("a", K) == {frozenset()} and top("b", S) == {frozenset()}
    assert eW_top(X2) == top and len(eW_bottom(X2)) == 0


def test_G_examples():
    g = EWPredicate(POINT, {("x", K): [[S]]})
    Gg = to_iR(g)
    assert list(Gg.source) == [("x", K, frozenset([S]))]
    assert Gg.source.name(("x", K, frozenset([S]))) == lam.pair(K, K)
    assert Gg.alpha(("x", K, frozenset([S]))) == {S}
    assert len(to_iR(EWPredicate(POINT, {})).source) == 0
    GF = to_iR(to_eW(two_fibre()))
    assert set(GF.source) == {("x", K, frozenset([K])), ("x", S, frozenset([S]))}


def test_round_trips_on_the_fixed_examples():
    g = EWPredicate(POINT, {("x", K): [[S]]})
    fg = to_eW(to_iR(g))
    assert leq_extW(fg, g, FG_COUNIT).holds
    assert leq_extW(g, fg, FG_UNIT).holds
    # k as ℓ₁ sends the tag ⟨φ(x), a⟩ to the constant function, which is not a tag
    assert leq_extW(g, fg, FG_UNIT_LITERAL).fails
    assert roundtrip_witnesses(two_fibre()).verdict.holds
    assert roundtrip_witnesses(g, literal_unit=True).verdict.fails


def test_naturality_on_a_two_element_map():
    X2 = PartitionedAssembly([("a", K), ("b", S)])
    k = Morphism(X2, POINT, {"a": "x", "b": "x"}, term("\\v. K"))
    p = two_fibre()
    lhs, rhs = eW_reindex(k, to_eW(p)), to_eW(iR_reindex(k, p))
    a, b = search_extW(lhs, rhs), search_extW(rhs, lhs)
    assert a is not None and leq_extW(lhs, rhs, a).holds
    assert b is not None and leq_extW(rhs, lhs, b).holds


def test_meet_with_top():
    g = EWPredicate(POINT, {("x", K): [[S]], ("x", S): [[K]]})
    m = eW_meet(g, eW_top(POINT))
    assert search_extW(m, g) is not None and search_extW(g, m) is not None


@given(rngs)
def test_reflexivity_holds_everywhere(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    g = sample.ew_predicate(rng, X)
    assert leq_extW(g, g, REFLEXIVITY).holds


@given(rngs)
def test_transitivity_composite(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    f, g, h = (sample.ew_predicate(rng, X) for _ in range(3))
    w1, w2 = search_extW(f, g), search_extW(g, h)
    assume(w1 is not None and w2 is not None)
    assert leq_extW(f, h, transitivity(w1, w2)).holds


@given(rngs)
def test_F_is_monotone(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p, q = sample.ir_predicate(rng, X, prefix="p"), sample.ir_predicate(rng, X, prefix="q")
    w = search_iR(p, q)
    assume(w is not None)
    assert leq_extW(to_eW(p), to_eW(q), F_monotone(w)).holds
    assert leq_extW(to_eW(p), to_eW(q), F_monotone_literal(w), literal=True).holds


@given(rngs)
def test_G_is_monotone(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    f, g = sample.ew_predicate(rng, X), sample.ew_predicate(rng, X)
    w = search_extW(f, g)
    assume(w is not None)
    assert iR_leq(to_iR(f), to_iR(g), G_monotone(f, g, w)).holds


@given(rngs)
def test_round_trips(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    assert roundtrip_witnesses(sample.ew_predicate(rng, X)).verdict.holds
    assert roundtrip_witnesses(sample.ir_predicate(rng, X)).verdict.holds


@given(rngs)
def test_naturality(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    X2 = sample.assembly(rng, rng.randint(1, 3), "u")
    p = sample.ir_predicate(rng, X)
    k = sample.morphism(rng, X2, X)
    lhs, rhs = eW_reindex(k, to_eW(p)), to_eW(iR_reindex(k, p))
    assert leq_extW(lhs, rhs, NATURALITY).holds
    assert leq_extW(rhs, lhs, NATURALITY).holds


# -- the fibre over the one-point assembly against the degree checker -------------

def test_degree_examples():
    f = degree({K: [[S]], S: []})
    assert f == {K: {frozenset([S])}}
    assert reducible(f, f, lam.I, lam.P2).holds
    assert reducible(f, degree({S: [[S]]}), lam.I, lam.P2).fails
    fib = to_fibre(f)
    assert fib.base == terminal() and from_fibre(fib) == f


witness_pairs = st.sampled_from([(lam.I, lam.P2), (K, lam.P2), (lam.I, lam.P1),
                                 (term("\\x. num:0"), lam.P2), (S, K), (term("\\x. x"), lam.I)])


@given(rngs, witness_pairs)
def test_terminal_fibre_agrees_with_degrees(rng, w):
    f = sample.degree(rng)
    g = {**f, **sample.degree(rng)} if rng.random() < 0.5 else sample.degree(rng)
    l1, l2 = w
    d = reducible(f, g, l1, l2)
    assert leq_extW(to_fibre(f), to_fibre(g), witness_to_fibre(l1, l2)).status == d.status
    e = leq_extW(to_fibre(f), to_fibre(g), EWWitness(l1, l2))
    assert reducible(f, g, *witness_from_fibre(EWWitness(l1, l2))).status == e.status
