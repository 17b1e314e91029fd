"""Extended Weihrauch predicates and their isomorphism with the instance
reducibility fibres.

An extended predicate over ``X`` sends an element and a tag term to a
finite set of finite sets of terms; only finitely many pairs are non-empty
(the *support*).  :func:`to_eW` and :func:`to_iR` are the two halves of the
fibre isomorphism, and the lattice operations here are computed by going
through it.

The order check comes in two flavours.  In the default one the backward
term ``ℓ₂`` receives the whole named instance ``⟨⟨φ(x), a⟩, q⟩``; in the
literal one it receives only ``⟨a, q⟩``.  The literal relation is not
transitive (``ℓ₂`` cannot recover ``x``, yet the intermediate tag depends
on it), so the default is the one that makes :func:`to_eW` and
:func:`to_iR` an isomorphism of preorders.  The literal relation is kept
for comparison and for the degree checker in :mod:`ewtopos.degrees`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import lam
from .assemblies import Morphism, PartitionedAssembly, identity
from .instance import (IRPredicate, IRWitness, iR_bottom, iR_exists, iR_join, iR_leq, iR_meet,
                       iR_top, search_iR)
from .pca import Pca, STANDARD, in_subpca
from .syntax import term
from .terms import Term, term_key
from .util import ekey, fmt, fmt_set, sort_elements
from .verdict import Verdict, fails, holds, unknown


class EWPredicate:
    __slots__ = ("base", "_support", "_hash")

    def __init__(self, base: PartitionedAssembly, support: Mapping):
        sup = {}
        for (x, a), outer in support.items():
            if x not in base:
                raise ValueError(f"{fmt(x)} is not in the base")
            outer = frozenset(frozenset(A) for A in outer)
            if outer:
                sup[(x, a)] = outer
        self.base = base
        self._support = {k: sup[k] for k in sorted(sup, key=ekey)}
        self._hash = hash((base, tuple(self._support.items())))

    def __call__(self, x, a) -> frozenset:
        return self._support.get((x, a), frozenset())

    def support(self) -> list:
        return list(self._support)

    def items(self):
        return list(self._support.items())

    def __len__(self):
        return len(self._support)

    def __eq__(self, other):
        return (isinstance(other, EWPredicate) and self.base == other.base
                and self._support == other._support)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        rows = ", ".join(f"({fmt(x)}, {fmt(a)}) -> {{{', '.join(fmt_set(A) for A in sort_elements(o))}}}"
                         for (x, a), o in self.items())
        return f"EW[{rows}]"


@dataclass(frozen=True)
class EWWitness:
    ell1: Term
    ell2: Term

    def __repr__(self):
        return f"EWWitness({fmt(self.ell1)}, {fmt(self.ell2)})"


def _first_B(pca, ell2, arg_of, A, Bs, fuel):
    """Index of the first ``B`` (canonical order) with ``ℓ₂·arg(q) ∈ A`` for
    all ``q ∈ B``; ``None`` if none works; ``"unknown"`` if some check ran
    out of fuel and nothing else worked."""
    maybe = False
    for i, B in enumerate(Bs):
        ok = True
        for q in sorted(B, key=term_key):
            out = pca.apply(ell2, arg_of(q), fuel=fuel)
            if out.exhausted:
                maybe = True
                ok = False
                break
            if not (out.converged and out.term in A):
                ok = False
                break
        if ok:
            return i
    return "unknown" if maybe else None


def leq_extW(f: EWPredicate, g: EWPredicate, w: EWWitness, pca: Pca = STANDARD,
             fuel: int | None = None, literal: bool = False) -> Verdict:
    """``f ≤ g``: for each supported ``(x, a)``, ``a′ = ℓ₁·⟨φ(x), a⟩`` is
    supported in ``g`` at ``x`` and every ``A ∈ f(x, a)`` has some
    ``B ∈ g(x, a′)`` with ``ℓ₂·⟨⟨φ(x), a⟩, q⟩ ∈ A`` for all ``q ∈ B``
    (``ℓ₂·⟨a, q⟩`` when ``literal``)."""
    if f.base != g.base:
        raise ValueError("predicates over different assemblies")
    if not (in_subpca(w.ell1) and in_subpca(w.ell2)):
        return fails("witness mentions an oracle")
    X = f.base
    pending = None
    for (x, a), outer in f.items():
        tag = lam.pair(X.name(x), a)
        out = pca.apply(w.ell1, tag, fuel=fuel)
        if out.exhausted:
            pending = pending if pending is not None else unknown(f"ℓ₁ ran out of fuel at ({fmt(x)}, {fmt(a)})", (x, a))
            continue
        if not out.converged:
            return fails(f"ℓ₁ is stuck at ({fmt(x)}, {fmt(a)})", (x, a))
        a2 = out.term
        Bs = sort_elements(g(x, a2))
        if not Bs:
            return fails(f"ℓ₁ sends ({fmt(x)}, {fmt(a)}) to {fmt(a2)}, outside the support", (x, a))
        head = a if literal else tag
        for A in sort_elements(outer):
            i = _first_B(pca, w.ell2, lambda q: lam.pair(head, q), A, Bs, fuel)
            if i is None:
                return fails(f"no solution set at ({fmt(x)}, {fmt(a)}) covers {fmt_set(A)}", (x, a, A))
            if i == "unknown":
                pending = pending if pending is not None else unknown(f"fuel exhausted at ({fmt(x)}, {fmt(a)})", (x, a, A))
    return pending if pending is not None else holds()


def obstruction(f: EWPredicate, g: EWPredicate) -> Verdict:
    """Failures that no witness can avoid: some ``x`` supported in ``f``
    has no support in ``g`` at all, or needs an empty solution set while
    every candidate ``B`` at ``x`` is non-empty.  ``holds`` means only that
    no such obstruction was found."""
    for (x, a), outer in f.items():
        at_x = [o for (x2, _), o in g.items() if x2 == x]
        if not at_x:
            return fails(f"nothing is supported at {fmt(x)} on the right", (x, a))
        if frozenset() in outer and all(B for o in at_x for B in o):
            return fails(f"({fmt(x)}, {fmt(a)}) needs an empty solution set", (x, a))
    return holds()


REFLEXIVITY = EWWitness(term("\\x. p2 x"), lam.P2)


def transitivity(w1: EWWitness, w2: EWWitness) -> EWWitness:
    """Composite of ``f ≤ g`` via ``(ℓ₁, ℓ₂)`` and ``g ≤ h`` via ``(m₁, m₂)``."""
    e1 = term("\\x. m1 <p1 x, l1 x>", m1=w2.ell1, l1=w1.ell1)
    e2 = term("\\z. l2 <p1 z, m2 <<p1 (p1 z), l1 (p1 z)>, p2 z>>",
              l2=w1.ell2, m2=w2.ell2, l1=w1.ell1)
    return EWWitness(e1, e2)


def eW_reindex(h: Morphism, g: EWPredicate) -> EWPredicate:
    """``(y, ⟨ψ(y), a⟩) ↦ g(h(y), a)``; every other pair is empty."""
    Y = h.source
    sup = {}
    for y in Y:
        for (x, a), outer in g.items():
            if x == h(y):
                sup[(y, lam.pair(Y.name(y), a))] = outer
    return EWPredicate(Y, sup)


# -- the fibre isomorphism -----------------------------------------------------

def to_eW(p: IRPredicate) -> EWPredicate:
    """``(x, a) ↦ {α(y) | f(y) = x, ψ(y) = a}``."""
    sup: dict = {}
    for y in p.source:
        sup.setdefault((p.display(y), p.source.name(y)), set()).add(p.alpha(y))
    return EWPredicate(p.base, sup)


def to_iR(g: EWPredicate) -> IRPredicate:
    """Carrier ``{(x, a, A) | A ∈ g(x, a)}`` in canonical order, named
    ``⟨φ(x), a⟩``; display and predicate are the first and third projections."""
    X = g.base
    elems = sort_elements((x, a, A) for (x, a), outer in g.items() for A in outer)
    Xg = PartitionedAssembly([(e, lam.pair(X.name(e[0]), e[1])) for e in elems], check=False)
    disp = Morphism(Xg, X, {e: e[0] for e in Xg}, lam.P1)
    return IRPredicate(disp, {e: e[2] for e in Xg})


F = to_eW
G = to_iR

FG_COUNIT = EWWitness(term("\\x. p2 (p2 x)"), lam.P2)
FG_UNIT_LITERAL = EWWitness(term("K"), lam.P2)
FG_UNIT = EWWitness(lam.I, lam.P2)

# Reindexing F(p) along k tags by ⟨φ′(x′), ψ(y)⟩, while F of the reindexed
# display tags by ⟨ψ(y), φ′(x′)⟩ with the same solution sets; swapping the
# pair in the tag is a witness in both directions.
NATURALITY = EWWitness(term("\\x. <p2 (p2 x), p1 (p2 x)>"), lam.P2)


def gf_unit(p: IRPredicate) -> IRWitness:
    """``p ≤ G(F(p))`` via ``y ↦ (f(y), ψ(y), α(y))``."""
    gf = to_iR(to_eW(p))
    h = Morphism(p.source, gf.source,
                 {y: (p.display(y), p.source.name(y), p.alpha(y)) for y in p.source},
                 term("\\x. <f x, x>", f=p.display.realizer))
    return IRWitness(h, lam.P2)


def gf_counit(p: IRPredicate) -> IRWitness:
    """``G(F(p)) ≤ p`` choosing the least ``y`` with the given data."""
    gf = to_iR(to_eW(p))
    choice = {}
    for y in p.source:
        choice.setdefault((p.display(y), p.source.name(y), p.alpha(y)), y)
    return IRWitness(Morphism(gf.source, p.source, {e: choice[e] for e in gf.source}, lam.P2),
                     lam.P2)


@dataclass
class RoundTrip:
    """Witnesses for one round trip, with their verdicts."""

    forward: object
    backward: object
    forward_verdict: Verdict
    backward_verdict: Verdict

    @property
    def verdict(self) -> Verdict:
        if not self.forward_verdict.holds:
            return self.forward_verdict.because("first direction")
        return self.backward_verdict.because("second direction")


def roundtrip_witnesses(instance, pca: Pca = STANDARD, fuel: int | None = None,
                        literal_unit: bool = False) -> RoundTrip:
    """For an extended predicate ``g``: ``F(G(g)) ≤ g`` and ``g ≤ F(G(g))``.
    For an instance predicate ``p``: ``p ≤ G(F(p))`` and ``G(F(p)) ≤ p``.

    ``literal_unit`` uses ``(k, p₂)`` for ``g ≤ F(G(g))``; that pair only
    works when ``k`` acts as the identity on tags, which the combinator
    ``K`` does not, so the default is ``(I, p₂)``."""
    if isinstance(instance, EWPredicate):
        fg = to_eW(to_iR(instance))
        unit = FG_UNIT_LITERAL if literal_unit else FG_UNIT
        return RoundTrip(FG_COUNIT, unit,
                         leq_extW(fg, instance, FG_COUNIT, pca, fuel),
                         leq_extW(instance, fg, unit, pca, fuel))
    if isinstance(instance, IRPredicate):
        gf = to_iR(to_eW(instance))
        u, c = gf_unit(instance), gf_counit(instance)
        return RoundTrip(u, c, iR_leq(instance, gf, u, pca, fuel), iR_leq(gf, instance, c, pca, fuel))
    raise TypeError("expected an EWPredicate or an IRPredicate")


def F_monotone(w: IRWitness) -> EWWitness:
    """From ``p ≤ q`` via ``(h, ℓ)`` (``h`` realized by ``r``):
    ``F(p) ≤ F(q)`` via ``(λξ. r(p₂ξ), λξ. ℓ⟨p₂(p₁ξ), p₂ξ⟩)``."""
    return EWWitness(term("\\x. r (p2 x)", r=w.mediator.realizer),
                     term("\\x. l <p2 (p1 x), p2 x>", l=w.ell))


def F_monotone_literal(w: IRWitness) -> EWWitness:
    """Same for the literal order, where ``ℓ₂`` already gets ``⟨ψ(y), q⟩``."""
    return EWWitness(term("\\x. r (p2 x)", r=w.mediator.realizer), w.ell)


def G_monotone(f: EWPredicate, g: EWPredicate, w: EWWitness, pca: Pca = STANDARD,
               fuel: int | None = None, literal: bool = False) -> IRWitness:
    """From ``f ≤ g`` via ``(ℓ₁, ℓ₂)``: ``G(f) ≤ G(g)`` via
    ``(x, a, A) ↦ (x, ℓ₁⟨φ(x), a⟩, first suitable B)`` realized by
    ``λξ.⟨p₁ξ, ℓ₁ξ⟩``; ``ℓ`` is ``ℓ₂`` (or ``λξ. ℓ₂⟨p₂(p₁ξ), p₂ξ⟩`` for the
    literal order).  Raises ``ValueError`` if ``w`` does not witness."""
    Gf, Gg = to_iR(f), to_iR(g)
    X = f.base
    mapping = {}
    for x, a, A in Gf.source:
        tag = lam.pair(X.name(x), a)
        out = pca.apply(w.ell1, tag, fuel=fuel)
        if not out.converged:
            raise ValueError(f"ℓ₁ does not converge at ({fmt(x)}, {fmt(a)})")
        a2 = out.term
        Bs = sort_elements(g(x, a2))
        head = a if literal else tag
        i = _first_B(pca, w.ell2, lambda q: lam.pair(head, q), A, Bs, fuel)
        if not isinstance(i, int):
            raise ValueError(f"witness does not cover ({fmt(x)}, {fmt(a)}, {fmt_set(A)})")
        mapping[(x, a, A)] = (x, a2, Bs[i])
    med = Morphism(Gf.source, Gg.source, mapping, term("\\x. <p1 x, l x>", l=w.ell1))
    ell = term("\\x. l <p2 (p1 x), p2 x>", l=w.ell2) if literal else w.ell2
    return IRWitness(med, ell)


def from_iR_witness(w: IRWitness) -> EWWitness:
    """An instance witness between ``G(f)`` and ``G(g)`` read as a witness
    of ``f ≤ g``: ``(λξ. p₂(rξ), ℓ)``."""
    return EWWitness(term("\\x. p2 (r x)", r=w.mediator.realizer), w.ell)


def search_extW(f: EWPredicate, g: EWPredicate, pool: Iterable[Term] | None = None,
                pca: Pca = STANDARD, fuel: int = 2000, **kw) -> EWWitness | None:
    """Search through the isomorphism: an instance witness for
    ``G(f) ≤ G(g)``, translated and re-checked."""
    w = search_iR(to_iR(f), to_iR(g), pool=pool, pca=pca, fuel=fuel, **kw)
    if w is None:
        return None
    ew = from_iR_witness(w)
    return ew if leq_extW(f, g, ew, pca, fuel).holds else None


# -- lattice structure, transported ------------------------------------------

def eW_top(X: PartitionedAssembly) -> EWPredicate:
    return to_eW(iR_top(X))


def eW_bottom(X: PartitionedAssembly) -> EWPredicate:
    return to_eW(iR_bottom(X))


def eW_meet(f: EWPredicate, g: EWPredicate) -> EWPredicate:
    return to_eW(iR_meet(to_iR(f), to_iR(g)))


def eW_join(f: EWPredicate, g: EWPredicate) -> EWPredicate:
    return to_eW(iR_join(to_iR(f), to_iR(g)).predicate)


def eW_exists(h: Morphism, f: EWPredicate) -> EWPredicate:
    return to_eW(iR_exists(h, to_iR(f)))


def restrict(g: EWPredicate) -> EWPredicate:
    """Reindexing along the identity: tags become ``⟨φ(x), a⟩``."""
    return eW_reindex(identity(g.base), g)
