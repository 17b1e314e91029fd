import pytest
from hypothesis import assume, given

from ewtopos import lam, sample
from ewtopos.assemblies import Morphism, PartitionedAssembly, identity
from ewtopos.instance import (BasePredicate, ImplicationUniverse, IRPredicate, IRWitness,
                              PoolTooSmall, bottom_witness, classify, curry_auto, eiR_meet,
                              eiR_reindex, eiR_top, forall_down, forall_requirements, forall_up,
                              iR_bottom, iR_curry, iR_exists, iR_forall, iR_forall_mate,
                              iR_implication, iR_join, iR_leq, iR_meet, iR_reindex, iR_top,
                              iR_uncurry, leq_eiR, meet_mediator, meet_projections, reflexivity,
                              search_eiR, search_equiv, search_iR, top_witness, transitivity)
from ewtopos.pca import set_oplus
from ewtopos.syntax import term
from ewtopos.terms import K, S, Oracle

from strategies import rngs

X2 = PartitionedAssembly([("x0", lam.numeral(0)), ("x1", lam.numeral(1))])


def equivalent(p, q):
    a, b = search_equiv(p, q)
    return (a is not None and b is not None
            and iR_leq(p, q, a).holds and iR_leq(q, p, b).holds)


def two_fibre():
    """One point named K; two instances named K and S with solutions {K}, {S}."""
    X = PartitionedAssembly([("x", K)])
    Y = PartitionedAssembly([("y1", K), ("y2", S)])
    f = Morphism(Y, X, {"y1": "x", "y2": "x"}, term("\\v. K"))
    return IRPredicate(f, {"y1": [K], "y2": [S]})


# -- base predicates ------------------------------------------------------------

def test_base_order_examples():
    a = BasePredicate(X2, {"x0": [K], "x1": [S, K]})
    assert leq_eiR(a, a, lam.P2).holds
    assert leq_eiR(a, eiR_top(X2), term("\\v. S")).holds
    empty = BasePredicate(X2, {"x0": [], "x1": [S]})
    nonempty = BasePredicate(X2, {"x0": [K], "x1": []})
    for hbar in (lam.I, lam.P2, K, S):
        assert leq_eiR(empty, nonempty, hbar).fails
    assert leq_eiR(a, a, Oracle("f")).fails


def test_base_meet():
    b = BasePredicate(X2, {"x0": [K], "x1": []})
    m = eiR_meet(eiR_top(X2), b)
    assert m("x0") == {lam.pair(lam.FALSE, K)}
    assert m("x1") == frozenset()
    assert m("x0") == set_oplus((), b("x0"))
    assert eiR_meet(eiR_top(X2), eiR_top(X2)) == eiR_top(X2)


def test_base_meet_projection_is_found():
    a = BasePredicate(X2, {"x0": [K], "x1": [S]})
    b = BasePredicate(X2, {"x0": [S], "x1": []})
    m = eiR_meet(a, b)
    hbar = search_eiR(a, m)
    assert hbar is not None and leq_eiR(a, m, hbar).holds


def test_base_reindexing_precomposes():
    b = BasePredicate(X2, {"x0": [K], "x1": [S]})
    h = Morphism(X2, X2, {"x0": "x1", "x1": "x1"})
    assert eiR_reindex(h, b)("x0") == {S}


# -- the instance order ---------------------------------------------------------

@given(rngs)
def test_reflexivity(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p = sample.ir_predicate(rng, X)
    assert iR_leq(p, p, reflexivity(p)).holds


@given(rngs)
def test_bottom_is_below_everything_with_any_ell(rng):
    X = sample.assembly(rng, rng.randint(0, 3))
    p = sample.ir_predicate(rng, X)
    for ell in (lam.I, K, S):
        assert iR_leq(iR_bottom(X), p, bottom_witness(p, ell)).holds
    assert iR_leq(p, iR_top(X), top_witness(p)).holds


@given(rngs)
def test_transitivity_composite(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p, q, r = (sample.ir_predicate(rng, X, prefix=c) for c in "pqr")
    w1 = search_iR(p, q)
    w2 = search_iR(q, r)
    assume(w1 is not None and w2 is not None)
    assert iR_leq(p, r, transitivity(w1, w2)).holds


def test_transitivity_on_meets():
    # (p∧q)∧r ≤ p∧q ≤ p, composed explicitly
    p = two_fibre()
    m, w1, _ = meet_projections(p, p)
    mm, v1, _ = meet_projections(m, p)
    assert iR_leq(mm, p, transitivity(v1, w1)).holds


def test_reindex_and_exists_shapes():
    p = two_fibre()
    X = p.base
    Xp = PartitionedAssembly([("u", S), ("v", lam.I)])
    h = Morphism(Xp, X, {"u": "x", "v": "x"}, term("\\v. K"))
    r = iR_reindex(h, p)
    assert len(r.source) == 4
    assert r.source.name(("y1", "u")) == lam.pair(K, S)
    assert r.alpha(("y2", "v")) == {S}
    one = PartitionedAssembly([("*", lam.I)])
    e = iR_exists(Morphism(X, one, {"x": "*"}, term("\\v. I")), p)
    assert e.source == p.source and e.base == one


# -- lattice structure ----------------------------------------------------------------

@given(rngs)
def test_meet_is_a_greatest_lower_bound(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p, q, r = (sample.ir_predicate(rng, X, prefix=c) for c in "pqr")
    m, w1, w2 = meet_projections(p, q)
    assert iR_leq(m, p, w1).holds and iR_leq(m, q, w2).holds
    a, b = search_iR(r, p), search_iR(r, q)
    assume(a is not None and b is not None)
    assert iR_leq(r, m, meet_mediator(r, p, q, a, b)).holds


def test_join_with_bottom():
    p = two_fibre()
    j = iR_join(iR_bottom(p.base), p)
    assert equivalent(j.predicate, p)


def test_join_injections_on_two_elements():
    p = two_fibre()
    q = IRPredicate(identity(p.base), {"x": [lam.I]})
    j = iR_join(p, q)
    assert iR_leq(p, j.predicate, j.left).holds and j.left.ell == lam.P2
    assert iR_leq(q, j.predicate, j.right).holds


@given(rngs)
def test_join_mediator(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p, q, r = (sample.ir_predicate(rng, X, prefix=c) for c in "pqr")
    a, b = search_iR(p, r), search_iR(q, r)
    assume(a is not None and b is not None)
    j = iR_join(p, q)
    assert iR_leq(j.predicate, r, j.mediate(a, b)).holds


# -- implication ----------------------------------------------------------------

def test_implication_into_top_is_top():
    p = two_fibre()
    X = p.base
    # the default universe cannot realize the section y ↦ x (it needs λv.K)
    assert "empty-carrier" in iR_implication(p, iR_top(X)).flags
    u = ImplicationUniverse.for_predicates(p, iR_top(X), pool=[term("\\v. K")])
    imp = iR_implication(p, iR_top(X), u)
    assert any(e[2] == frozenset() for e in imp.predicate.source)
    assert equivalent(imp.predicate, iR_top(X))


def test_implication_from_bottom_is_top():
    q = two_fibre()
    X = q.base
    imp = iR_implication(iR_bottom(X), q)
    assert equivalent(imp.predicate, iR_top(X))


def test_curry_of_a_meet_projection():
    p = two_fibre()
    m, _, w2 = meet_projections(p, p)
    w, imp, _ = curry_auto(p, p, p, w2)
    assert w.ell == lam.P2
    assert iR_leq(p, imp.predicate, w).holds
    assert iR_leq(m, p, iR_uncurry(p, p, p, w, imp)).holds


def test_curry_of_the_frobenius_style_witness():
    # p∧p ≤ p by the left projection, curried
    p = two_fibre()
    m, w1, _ = meet_projections(p, p)
    w, imp, _ = curry_auto(p, p, p, w1)
    assert iR_leq(p, imp.predicate, w).holds


def test_curry_reports_a_small_universe():
    from ewtopos.instance import UniverseTooSmall
    p = two_fibre()
    _, _, w2 = meet_projections(p, p)
    imp = iR_implication(p, p, ImplicationUniverse())
    with pytest.raises(UniverseTooSmall):
        iR_curry(p, p, p, w2, imp)


@given(rngs)
def test_curry_and_uncurry(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    r, p, q = (sample.ir_predicate(rng, X, prefix=c) for c in "rpq")
    rp = iR_meet(r, p)
    w = search_iR(rp, q)
    assume(w is not None)
    wc, imp, _ = curry_auto(r, p, q, w)
    assert iR_leq(r, imp.predicate, wc).holds
    assert iR_leq(rp, q, iR_uncurry(r, p, q, wc, imp)).holds


# -- ∃ and reindexing --------------------------------------------------------------

def exists_mate_down(f, p, q, w):
    """From ∃_f p ≤ q build p ≤ f*q."""
    fq = iR_reindex(f, q)
    med = Morphism(p.source, fq.source, {y: (w.mediator(y), p.display(y)) for y in p.source},
                   term("\\u. <m u, d u>", m=w.mediator.realizer, d=p.display.realizer))
    return fq, IRWitness(med, w.ell)


def exists_mate_up(f, p, q, w):
    """From p ≤ f*q build ∃_f p ≤ q."""
    med = Morphism(p.source, q.source, {y: w.mediator(y)[0] for y in p.source},
                   term("\\u. p1 (m u)", m=w.mediator.realizer))
    return iR_exists(f, p), IRWitness(med, w.ell)


@given(rngs)
def test_exists_is_left_adjoint_to_reindexing(rng):
    X = sample.assembly(rng, rng.randint(1, 3), "x")
    Z = sample.assembly(rng, rng.randint(1, 3), "z")
    f = sample.morphism(rng, X, Z)
    p = sample.ir_predicate(rng, X, prefix="p")
    q = sample.ir_predicate(rng, Z, prefix="q")
    ep = iR_exists(f, p)
    w = search_iR(ep, q)
    if w is not None:
        fq, down = exists_mate_down(f, p, q, w)
        assert iR_leq(p, fq, down).holds
    fq = iR_reindex(f, q)
    v = search_iR(p, fq)
    if v is not None:
        ep, up = exists_mate_up(f, p, q, v)
        assert iR_leq(ep, q, up).holds
    # one side has a witness exactly when the other does (within the search)
    assert (w is None) == (v is None)


# -- universal quantification ----------------------------------------------------

def test_forall_along_identity():
    p = two_fibre()
    fa = iR_forall(identity(p.base), p, pool=[term("\\v. K"), term("\\v. S"), lam.I])
    assert equivalent(fa.predicate, p)


def test_forall_of_top_is_top():
    X = X2
    Y = PartitionedAssembly([("y0", lam.numeral(0)), ("y1", lam.numeral(1))])
    f = sample.morphism(None, Y, X, {"y0": "x0", "y1": "x0"})
    fa = iR_forall(f, iR_top(Y), pool=[lam.I])
    assert all(fa.predicate.alpha(e) == frozenset() for e in fa.predicate.source)
    assert equivalent(fa.predicate, iR_top(X))


def test_forall_over_an_empty_fibre():
    Y = PartitionedAssembly([("y0", lam.numeral(0))])
    f = sample.morphism(None, Y, X2, {"y0": "x0"})
    fa = iR_forall(f, iR_top(Y), pool=[lam.I, K])
    over_x1 = [e for e in fa.predicate.source if e[0] == "x1"]
    assert [e[2] for e in over_x1] == [lam.I, K]
    assert all(fa.predicate.alpha(e) == frozenset() for e in over_x1)


def forall_instance():
    """f : Y → X with a two-element fibre over x0; s over X and inner over Y
    carry the names as solutions, so f*(s) ≤ inner by (x, y) ↦ y."""
    Y = PartitionedAssembly([("y0", lam.numeral(0)), ("y1", lam.numeral(1)),
                             ("y2", lam.numeral(2))])
    f = sample.morphism(None, Y, X2, {"y0": "x0", "y1": "x0", "y2": "x1"})
    s = IRPredicate(identity(X2), {x: [X2.name(x)] for x in X2})
    inner = IRPredicate(identity(Y), {y: [Y.name(y)] for y in Y})
    fs = iR_reindex(f, s)
    med = Morphism(fs.source, inner.source, {(x, y): y for x, y in fs.source}, lam.P2)
    return f, s, inner, IRWitness(med, term("\\u. p1 (p1 u)"))


def test_forall_mates_on_a_two_element_fibre():
    f, s, inner, w = forall_instance()
    fs = iR_reindex(f, s)
    assert iR_leq(fs, inner, w).holds
    fa = iR_forall(f, inner, pool=forall_requirements(iR_forall(f, inner, pool=[]), s, w))
    up = iR_forall_mate("up", fa, s, w)
    assert iR_leq(s, fa.predicate, up).holds
    down = iR_forall_mate("down", fa, s, up)
    assert iR_leq(fs, inner, down).holds
    with pytest.raises(ValueError):
        iR_forall_mate("sideways", fa, s, w)


def test_forall_mate_needs_the_transposed_realizers():
    f, s, inner, w = forall_instance()
    fa = iR_forall(f, inner, pool=[lam.I])
    with pytest.raises(PoolTooSmall):
        forall_up(fa, s, w)


def test_forall_mates_along_identity():
    X = two_fibre().base
    idf = identity(X)
    s = IRPredicate(identity(X), {"x": [K, S]})
    top = iR_top(X)
    ts = iR_reindex(idf, s)
    med = Morphism(ts.source, top.source, {(x, y): y for x, y in ts.source}, lam.P2)
    w = IRWitness(med, lam.I)
    assert iR_leq(ts, top, w).holds
    fa0 = iR_forall(idf, top, pool=[])
    fa = iR_forall(idf, top, pool=forall_requirements(fa0, s, w))
    up = forall_up(fa, s, w)
    assert iR_leq(s, fa.predicate, up).holds
    assert iR_leq(ts, top, forall_down(fa, s, up)).holds


# -- classification -----------------------------------------------------------------

def test_classify_top():
    top = iR_top(X2)
    c = classify(top)
    assert [e for e in c.canonical.source] == [(x, X2.name(x), frozenset()) for x in X2]
    assert iR_leq(top, c.canonical, c.to_canonical).holds
    assert iR_leq(c.canonical, top, c.from_canonical).holds


def test_classify_two_fibre():
    p = two_fibre()
    c = classify(p)
    assert c.chi("x") == {K: {frozenset([K])}, S: {frozenset([S])}}
    assert c.chi.at("x", K) == {frozenset([K])}
    assert c.to_canonical.ell == lam.P2 and c.from_canonical.ell == lam.P2


@given(rngs)
def test_classification_round_trip(rng):
    X = sample.assembly(rng, rng.randint(1, 3))
    p = sample.ir_predicate(rng, X)
    c = classify(p)
    assert iR_leq(p, c.canonical, c.to_canonical).holds
    assert iR_leq(c.canonical, p, c.from_canonical).holds
    cc = classify(c.canonical)
    assert iR_leq(c.canonical, cc.canonical, cc.to_canonical).holds
    assert iR_leq(cc.canonical, c.canonical, cc.from_canonical).holds
