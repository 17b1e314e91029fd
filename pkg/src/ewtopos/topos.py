"""Partial equivalence relations and functional relations valued in
extended Weihrauch predicates.

Objects are pairs ``(X, ρ)`` with ``ρ`` an extended predicate over
``X×X`` that is symmetric and transitive; arrows are extended predicates
over ``X×Y`` satisfying five inequalities.  Every inequality is carried as
a certificate (an :class:`EWWitness`), so validity of a stored object or
arrow is re-checkable; missing certificates are searched for.

Reindexing along product projections uses :func:`eW_reindex`; meets and
existential images go through the instance-reducibility side, where they
have direct finite formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import lam
from .assemblies import Morphism, PartitionedAssembly, identity, product
from .instance import IRPredicate, IRWitness, iR_exists, iR_meet, iR_reindex
from .pca import Pca, STANDARD
from .syntax import term
from .verdict import Verdict, fails, holds, unknown
from .weihrauch import (EWPredicate, EWWitness, eW_exists, eW_meet, eW_reindex, leq_extW,
                        obstruction, search_extW, to_eW, to_iR)


# -- products and projection maps --------------------------------------------

def square(X: PartitionedAssembly) -> PartitionedAssembly:
    return product(X, X)[0]


def triple(A: PartitionedAssembly, B: PartitionedAssembly, C: PartitionedAssembly) -> PartitionedAssembly:
    """``A×B×C`` with elements ``(a, b, c)`` named ``⟨α, ⟨β, γ⟩⟩``."""
    return PartitionedAssembly(
        [((a, b, c), lam.pair(A.name(a), lam.pair(B.name(b), C.name(c))))
         for a in A for b in B for c in C], check=False)


_TRIPLE_PROJ = (term("\\x. p1 x"), term("\\x. p1 (p2 x)"), term("\\x. p2 (p2 x)"))


def tuple_map(T: PartitionedAssembly, target: PartitionedAssembly, i: int, j: int) -> Morphism:
    """``⟨πᵢ, πⱼ⟩ : A×B×C → target`` (indices from 1)."""
    real = term("\\x. <u x, v x>", u=_TRIPLE_PROJ[i - 1], v=_TRIPLE_PROJ[j - 1])
    return Morphism(T, target, {t: (t[i - 1], t[j - 1]) for t in T}, real)


def pair_map(P: PartitionedAssembly, target: PartitionedAssembly, i: int, j: int) -> Morphism:
    """``⟨πᵢ, πⱼ⟩ : A×B → target``; ``(2, 1)`` is the swap."""
    proj = (lam.P1, lam.P2)
    real = term("\\x. <u x, v x>", u=proj[i - 1], v=proj[j - 1])
    return Morphism(P, target, {t: (t[i - 1], t[j - 1]) for t in P}, real)


def diagonal(X: PartitionedAssembly) -> Morphism:
    return Morphism(X, square(X), {x: (x, x) for x in X}, term("\\x. <x, x>"))


def first_projection(P: PartitionedAssembly, X: PartitionedAssembly) -> Morphism:
    return Morphism(P, X, {t: t[0] for t in P}, lam.P1)


# -- inequalities with certificates ------------------------------------------

@dataclass
class Condition:
    name: str
    lhs: EWPredicate
    rhs: EWPredicate


@dataclass
class Certified:
    """Verdict of one condition with the certificate that was used."""

    name: str
    verdict: Verdict
    witness: EWWitness | None


def certify(c: Condition, witness: EWWitness | None, pool, pca: Pca, fuel: int,
            search: bool = True) -> Certified:
    if witness is not None:
        v = leq_extW(c.lhs, c.rhs, witness, pca, fuel)
        if v.holds or not search:
            return Certified(c.name, v.because(c.name), witness)
    if not search:
        return Certified(c.name, unknown(f"{c.name}: no certificate"), None)
    w = search_extW(c.lhs, c.rhs, pool=pool, pca=pca, fuel=fuel)
    if w is None:
        ob = obstruction(c.lhs, c.rhs)
        if ob.fails:
            return Certified(c.name, ob.because(c.name), None)
        return Certified(c.name, unknown(f"{c.name}: certificate search failed"), None)
    return Certified(c.name, leq_extW(c.lhs, c.rhs, w, pca, fuel).because(c.name), w)


def _verdict(results: Sequence[Certified]) -> Verdict:
    pending = None
    for r in results:
        if r.verdict.fails:
            return r.verdict
        if r.verdict.unknown and pending is None:
            pending = r.verdict
    return pending if pending is not None else holds()


# -- objects ----------------------------------------------------------------

@dataclass
class ToposObject:
    base: PartitionedAssembly
    rho: EWPredicate
    certificates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rho.base != square(self.base):
            raise ValueError("ρ must live over the square of the base")


def object_conditions(o: ToposObject) -> list[Condition]:
    X = o.base
    X2 = square(X)
    X3 = triple(X, X, X)
    rho = o.rho
    sym = Condition("symmetry", eW_reindex(identity(X2), rho),
                    eW_reindex(pair_map(X2, X2, 2, 1), rho))
    t12 = eW_reindex(tuple_map(X3, X2, 1, 2), rho)
    t23 = eW_reindex(tuple_map(X3, X2, 2, 3), rho)
    t13 = eW_reindex(tuple_map(X3, X2, 1, 3), rho)
    trans = Condition("transitivity", eW_meet(t12, t23), t13)
    return [sym, trans]


def validate_object(o: ToposObject, pool=None, pca: Pca = STANDARD, fuel: int = 2000,
                    search: bool = True) -> tuple[Verdict, list[Certified]]:
    """Check symmetry and transitivity (certificates from ``o`` first,
    otherwise searched).  Failed searches give ``unknown``; a supplied
    certificate that does not verify, with search disabled, gives ``fails``."""
    res = [certify(c, o.certificates.get(c.name), pool, pca, fuel, search)
           for c in object_conditions(o)]
    for r in res:
        if r.verdict.holds:
            o.certificates[r.name] = r.witness
    return _verdict(res), res


def discrete(X: PartitionedAssembly) -> ToposObject:
    """The diagonal relation: ``ρ((x, x), φ(x)) = {∅}``."""
    return embed_R(WeakSubobjectObject(X, diagonal(X)))


# -- arrows -----------------------------------------------------------------

ARROW_CONDITIONS = ("strict", "left-relational", "right-relational", "single-valued", "total")


@dataclass
class ToposArrow:
    source: ToposObject
    target: ToposObject
    phi: EWPredicate
    certificates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.phi.base != product(self.source.base, self.target.base)[0]:
            raise ValueError("φ must live over source × target")


def arrow_conditions(a: ToposArrow) -> list[Condition]:
    A, B = a.source.base, a.target.base
    rho, sigma, phi = a.source.rho, a.target.rho, a.phi
    AB = product(A, B)[0]
    AA, BB = square(A), square(B)
    strict = Condition("strict", eW_reindex(identity(AB), phi),
                       eW_meet(eW_reindex(pair_map(AB, AA, 1, 1), rho),
                               eW_reindex(pair_map(AB, BB, 2, 2), sigma)))
    AAB = triple(A, A, B)
    left = Condition("left-relational",
                     eW_meet(eW_reindex(tuple_map(AAB, AA, 1, 2), rho),
                             eW_reindex(tuple_map(AAB, AB, 2, 3), phi)),
                     eW_reindex(tuple_map(AAB, AB, 1, 3), phi))
    ABB = triple(A, B, B)
    right = Condition("right-relational",
                      eW_meet(eW_reindex(tuple_map(ABB, AB, 1, 2), phi),
                              eW_reindex(tuple_map(ABB, BB, 2, 3), sigma)),
                      eW_reindex(tuple_map(ABB, AB, 1, 3), phi))
    single = Condition("single-valued",
                       eW_meet(eW_reindex(tuple_map(ABB, AB, 1, 2), phi),
                               eW_reindex(tuple_map(ABB, AB, 1, 3), phi)),
                       eW_reindex(tuple_map(ABB, BB, 2, 3), sigma))
    total = Condition("total", eW_reindex(diagonal(A), rho),
                      eW_exists(first_projection(AB, A), phi))
    return [strict, left, right, single, total]


def validate_arrow(a: ToposArrow, pool=None, pca: Pca = STANDARD, fuel: int = 2000,
                   search: bool = True) -> tuple[Verdict, list[Certified]]:
    """Check the five conditions; the verdict names the first failing one
    by its index (1 to 5)."""
    res = []
    for i, c in enumerate(arrow_conditions(a), 1):
        r = certify(c, a.certificates.get(c.name), pool, pca, fuel, search)
        r.verdict = r.verdict.because(f"condition {i}") if not r.verdict.holds else r.verdict
        res.append(r)
        if r.verdict.holds:
            a.certificates[c.name] = r.witness
    return _verdict(res), res


def identity_arrow(o: ToposObject) -> ToposArrow:
    return ToposArrow(o, o, o.rho)


def compose(a: ToposArrow, b: ToposArrow, pool=None, pca: Pca = STANDARD, fuel: int = 2000,
            search: bool = True) -> tuple[ToposArrow, Verdict]:
    """``b ∘ a``: ``∃_{⟨π₁,π₃⟩}(P_{⟨π₁,π₂⟩}(φ) ∧ P_{⟨π₂,π₃⟩}(ψ))`` computed on
    the instance side and brought back.  The certificates of the result are
    searched; the returned verdict reports whether that succeeded."""
    if a.target.base != b.source.base:
        raise ValueError("arrows do not compose")
    X, Y, Z = a.source.base, a.target.base, b.target.base
    T = triple(X, Y, Z)
    XY, YZ, XZ = product(X, Y)[0], product(Y, Z)[0], product(X, Z)[0]
    p = iR_reindex(tuple_map(T, XY, 1, 2), to_iR(a.phi))
    q = iR_reindex(tuple_map(T, YZ, 2, 3), to_iR(b.phi))
    chi = to_eW(iR_exists(tuple_map(T, XZ, 1, 3), iR_meet(p, q)))
    out = ToposArrow(a.source, b.target, chi)
    if not search:
        return out, unknown("certificates not searched")
    v, _ = validate_arrow(out, pool, pca, fuel)
    return out, v


def arrow_equiv(a: ToposArrow, b: ToposArrow, pool=None, pca: Pca = STANDARD,
                fuel: int = 2000) -> tuple[Verdict, EWWitness | None, EWWitness | None]:
    """``a ≅ b`` by witnesses both ways between the relations."""
    w1 = search_extW(a.phi, b.phi, pool=pool, pca=pca, fuel=fuel)
    w2 = search_extW(b.phi, a.phi, pool=pool, pca=pca, fuel=fuel)
    if w1 is None or w2 is None:
        return unknown("no witness found for one direction"), w1, w2
    v1 = leq_extW(a.phi, b.phi, w1, pca, fuel)
    v2 = leq_extW(b.phi, a.phi, w2, pca, fuel)
    if not v1.holds:
        return v1, w1, w2
    return v2, w1, w2


def graph(f: Morphism, src: ToposObject, tgt: ToposObject) -> ToposArrow:
    """The relation ``{(x, f(x))}`` with trivial evidence, tagged by the
    name of the pair."""
    P = product(src.base, tgt.base)[0]
    support = {((x, f(x)), P.name((x, f(x)))): [[]] for x in src.base}
    return ToposArrow(src, tgt, EWPredicate(P, support))


# -- weak subobjects and the embedding ------------------------------------------

@dataclass
class WeakSubobjectObject:
    base: PartitionedAssembly
    rho_display: Morphism

    def __post_init__(self):
        if self.rho_display.target != square(self.base):
            raise ValueError("display must land in the square of the base")


def r_predicate(display: Morphism) -> EWPredicate:
    """A weak subobject as the extended predicate with empty evidence."""
    return to_eW(IRPredicate(display, {y: () for y in display.source}))


def l_display(g: EWPredicate) -> Morphism:
    """Forget the evidence: the display of ``G(g)``."""
    return to_iR(g).display


def embed_R(w: WeakSubobjectObject) -> ToposObject:
    return ToposObject(w.base, r_predicate(w.rho_display))


def project_L(o: ToposObject) -> WeakSubobjectObject:
    return WeakSubobjectObject(o.base, l_display(o.rho))


def lr_identity(w: WeakSubobjectObject, pca: Pca = STANDARD, fuel: int | None = None) -> Verdict:
    """``l(r(w)) = w`` up to isomorphism over the base: ``y ↦ (d(y), ψ(y), ∅)``
    must be a bijection onto the new carrier, realized by ``λξ.⟨r ξ, ξ⟩``
    with inverse realized by ``p₂``.  Fails when two elements of a fibre
    share a name, since ``r`` identifies them."""
    back = project_L(embed_R(w))
    if back.base != w.base:
        return fails("base changed")
    d, e = w.rho_display, back.rho_display
    mapping = {y: (d(y), d.source.name(y), frozenset()) for y in d.source}
    if len(set(mapping.values())) != len(d.source):
        return fails("two elements of a fibre share a name; they are identified")
    if set(mapping.values()) != set(e.source):
        return fails("carriers differ")
    if any(e(mapping[y]) != d(y) for y in d.source):
        return fails("displays differ")
    there = Morphism(d.source, e.source, mapping, term("\\x. <r x, x>", r=d.realizer))
    inverse = {v: y for y, v in mapping.items()}
    back_map = Morphism(e.source, d.source, inverse, lam.P2)
    v = there.verify(pca, fuel)
    if not v.holds:
        return v.because("forward map")
    return back_map.verify(pca, fuel).because("inverse map")


def unit_witness(p: IRPredicate) -> tuple[IRPredicate, IRWitness]:
    """``p ≤ r(l(p)) = (f, ⊤)`` via the identity; ``ℓ`` is never used."""
    top = IRPredicate(p.display, {y: () for y in p.source})
    return top, IRWitness(identity(p.source), lam.I)
