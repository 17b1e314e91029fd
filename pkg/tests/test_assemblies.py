import itertools

import pytest
from hypothesis import given, strategies as st

from ewtopos import lam, sample
from ewtopos.assemblies import (Assembly, AssemblyError, Morphism, PartitionedAssembly, Pool,
                                bang, coproduct, empty, identity, instance_reducible,
                                pairing, partition_predicate, product, pullback, search_realizer,
                                terminal, verify_morphism)
from ewtopos.gen import sk_terms
from ewtopos.syntax import term
from ewtopos.terms import K, S

from strategies import rngs, sk_terms as sk_strategy

KS = PartitionedAssembly([("a", K), ("b", S)])


def test_identity_is_realized_by_i():
    assert verify_morphism(KS, KS, {"a": "a", "b": "b"}, lam.I).holds


def test_constant_map():
    tgt = PartitionedAssembly([("k", K)])
    assert verify_morphism(KS, tgt, {"a": "k", "b": "k"}, term("\\x. K")).holds


def test_wrong_realizer_fails_at_the_element():
    src = PartitionedAssembly([("a", K)])
    tgt = PartitionedAssembly([("b", S)])
    v = verify_morphism(src, tgt, {"a": "b"}, lam.I)
    assert v.fails and v.witness == "a"


def test_oracle_realizers_are_rejected():
    from ewtopos.terms import Oracle
    assert verify_morphism(KS, KS, {"a": "a", "b": "b"}, Oracle("f")).fails


def test_divergent_realizer_is_unknown():
    omega = term("(\\x. x x) (\\x. x x)")
    v = verify_morphism(KS, KS, {"a": "a", "b": "b"}, K(omega), fuel=200)
    assert v.unknown


def test_search_finds_skk_first_among_sk_terms():
    pool = [t for n in range(1, 4) for t in sk_terms(n)]
    found = search_realizer(KS, KS, {"a": "a", "b": "b"}, pool)
    assert found == S(K, K)


def test_search_reports_impossible_maps():
    src = PartitionedAssembly([("a", K)])
    tgt = PartitionedAssembly([("b", S)])
    assert search_realizer(src, tgt, {"a": "b"}, [lam.I]) is None


def test_search_finds_a_second_projection():
    P = PartitionedAssembly([("p", lam.pair(K, S)), ("q", lam.pair(S, K))])
    found = search_realizer(P, KS, {"p": "b", "q": "a"}, Pool())
    assert found is not None
    assert verify_morphism(P, KS, {"p": "b", "q": "a"}, found).holds


def test_pullback_of_identities_is_the_diagonal():
    P, q1, q2 = pullback(identity(KS), identity(KS))
    assert list(P) == [("a", "a"), ("b", "b")]
    assert q1.verify().holds and q2.verify().holds


def test_pullback_of_constants_is_the_product():
    one = terminal()
    P, _, _ = pullback(bang(KS, one), bang(KS, one))
    assert len(P) == len(KS) ** 2


def test_pullback_of_disjoint_images_is_empty():
    tgt = PartitionedAssembly([("u", K), ("v", S)])
    f = Morphism(KS, tgt, {"a": "u", "b": "u"}, term("\\x. K"))
    g = Morphism(KS, tgt, {"a": "v", "b": "v"}, term("\\x. S"))
    assert len(pullback(f, g)[0]) == 0


def test_coproduct_examples():
    C, inl, inr = coproduct(empty(), KS)
    assert [x for x in C] == [("inr", "a"), ("inr", "b")]
    assert all(lam.unpair(C.name(x))[0] == lam.FALSE for x in C)
    one = PartitionedAssembly([("u", K)])
    C, inl, inr = coproduct(one, one)
    assert [C.name(x) for x in C] == [lam.pair(lam.TRUE, K), lam.pair(lam.FALSE, K)]
    assert inl.verify().holds and inr.verify().holds
    assert inl.realizer == term("\\x. <true, x>")


def test_products():
    one = terminal()
    P, p1, p2 = product(one, KS)
    back = Morphism(P, KS, {x: x[1] for x in P}, lam.P2)
    assert back.verify().holds
    X3 = PartitionedAssembly([(i, lam.numeral(i)) for i in range(3)])
    assert len(product(X3, KS)[0]) == 6
    assert bang(X3).verify().holds


def test_partition_examples():
    X = Assembly({"x": [K]})
    part = partition_predicate(X, {"x": {S}})
    assert list(part.assembly) == [("x", K)]
    assert part.alpha[("x", K)] == {lam.pair(S, K)}
    two = Assembly({"x": [K, S]})
    assert len(partition_predicate(two, {"x": set()}).assembly) == 2
    already = Assembly.from_partitioned(KS)
    assert len(partition_predicate(already, {"a": set(), "b": set()}).assembly) == len(KS)


def test_morphisms_must_be_total():
    with pytest.raises(AssemblyError):
        Morphism(KS, KS, {"a": "a"})


def test_names_must_be_normal():
    with pytest.raises(AssemblyError):
        PartitionedAssembly([("a", K(K, S))])


realizer_sets = st.lists(st.sampled_from([K, S, lam.I, lam.FALSE, lam.pair(K, S)]),
                         min_size=1, max_size=2, unique=True)
value_sets = st.frozensets(st.sampled_from([K, S, lam.I]), max_size=2)


@given(st.dictionaries(st.sampled_from("xyz"), realizer_sets, min_size=1, max_size=3),
       st.data())
def test_partition_witnesses_verify_both_ways(realizers, data):
    X = Assembly(realizers)
    phi = {x: data.draw(value_sets) for x in X}
    part = partition_predicate(X, phi)
    PX = Assembly.from_partitioned(part.assembly)
    assert instance_reducible(X, phi, PX, part.alpha, *part.forward).holds
    assert instance_reducible(PX, part.alpha, X, phi, *part.backward).holds


@given(rngs)
def test_structure_maps_verify(rng):
    X = sample.assembly(rng, rng.randint(0, 3), "x")
    Y = sample.assembly(rng, rng.randint(0, 3), "y")
    P, p1, p2 = product(X, Y)
    assert p1.verify().holds and p2.verify().holds
    C, inl, inr = coproduct(X, Y)
    assert inl.verify().holds and inr.verify().holds
    if len(X) and len(Y):
        Z = sample.assembly(rng, rng.randint(1, 3), "z")
        f, g = sample.morphism(rng, X, Z), sample.morphism(rng, Y, Z)
        Q, q1, q2 = pullback(f, g)
        assert q1.verify().holds and q2.verify().holds


@given(rngs)
def test_pullback_universal_property(rng):
    X = sample.assembly(rng, rng.randint(1, 2), "x")
    Y = sample.assembly(rng, rng.randint(1, 2), "y")
    E = sample.assembly(rng, rng.randint(1, 2), "e")
    W = sample.assembly(rng, rng.randint(1, 2), "w")
    f, g = sample.morphism(rng, Y, X), sample.morphism(rng, E, X)
    P, q1, q2 = pullback(f, g)
    for av in itertools.product(list(Y), repeat=len(W)):
        for bv in itertools.product(list(E), repeat=len(W)):
            a = dict(zip(W, av))
            b = dict(zip(W, bv))
            if any(f(a[w]) != g(b[w]) for w in W):
                continue
            mediators = [m for m in itertools.product(list(P), repeat=len(W))
                         if all(q1(m[i]) == a[w] and q2(m[i]) == b[w] for i, w in enumerate(W))]
            assert len(mediators) == 1
            legs_a = sample.morphism(None, W, Y, a)
            legs_b = sample.morphism(None, W, E, b)
            pool = Pool(registered=[pairing(legs_a, legs_b).realizer], max_leaves=2)
            mapping = dict(zip(W, mediators[0]))
            assert search_realizer(W, P, mapping, pool) is not None


@given(sk_strategy(4), st.integers(0, 60), st.integers(0, 400))
def test_verification_is_monotone_in_fuel(t, n, extra):
    small = verify_morphism(KS, KS, {"a": "a", "b": "b"}, t, fuel=n)
    big = verify_morphism(KS, KS, {"a": "a", "b": "b"}, t, fuel=n + extra)
    if not small.unknown:
        assert big.status == small.status
