"""Instance reducibility on partitioned assemblies.

Two layers:

* base predicates ``α : |X| → finite sets of terms`` ordered by a single
  oracle-free term ``h̄`` (``h̄·⟨φ(x), q⟩ ∈ α(x)`` for all ``q ∈ β(x)``);
* their existential completion: predicates ``(f : Y → X, α)`` with a display
  morphism, ordered by a mediating morphism plus a term ``ℓ``.

Everything in the second layer is explicit: meets and reindexing are
pullbacks, joins are coproducts, implication and universal quantification
are finite approximations of the exact objects, parameterised by the terms
the caller lets them range over.  Every construction that produces an order
witness produces it as data, and :func:`iR_leq` re-checks it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import lam
from .assemblies import (Morphism, PartitionedAssembly, compose, copair, coproduct,
                         empty, functions, identity, pullback)
from .pca import Pca, STANDARD, in_subpca, set_oplus, set_otimes
from .syntax import term
from .synth import Synthesizer
from .terms import Term, term_key
from .util import FMap, fmt, fmt_set
from .verdict import Verdict, fails, first_failure, holds, unknown


class UniverseTooSmall(Exception):
    """A tuple needed by a construction is missing from a finite
    approximation; ``missing`` lists what has to be added."""

    def __init__(self, what: str, missing):
        self.missing = missing
        super().__init__(what)


class PoolTooSmall(UniverseTooSmall):
    """The realizer pool of a ``∀`` object lacks a needed term."""


def _lands(pca: Pca, t: Term, arg: Term, targets, fuel) -> Verdict:
    out = pca.apply(t, arg, fuel=fuel)
    if out.converged:
        if out.term in targets:
            return holds()
        return fails(f"{fmt(t)} sends {fmt(arg)} to {fmt(out.term)}, not in {fmt_set(targets)}",
                     arg)
    if out.stuck:
        return fails(f"{fmt(t)} is stuck on {fmt(arg)}", arg)
    return unknown(f"fuel exhausted applying {fmt(t)} to {fmt(arg)}", arg)


# -- base predicates ----------------------------------------------------------

class BasePredicate:
    __slots__ = ("base", "_values")

    def __init__(self, base: PartitionedAssembly, values: Mapping):
        self.base = base
        self._values = {x: frozenset(values[x]) for x in base}

    def __call__(self, x) -> frozenset:
        return self._values[x]

    def items(self):
        return [(x, self._values[x]) for x in self.base]

    def __eq__(self, other):
        return (isinstance(other, BasePredicate) and self.base == other.base
                and self._values == other._values)

    def __hash__(self):
        return hash((self.base, tuple(self._values.items())))

    def __repr__(self):
        return "{" + ", ".join(f"{fmt(x)}: {fmt_set(v)}" for x, v in self.items()) + "}"


def leq_eiR(alpha: BasePredicate, beta: BasePredicate, hbar: Term,
            pca: Pca = STANDARD, fuel: int | None = None) -> Verdict:
    """``α ≤ β``: ``h̄·⟨φ(x), q⟩ ∈ α(x)`` for every ``x`` and ``q ∈ β(x)``."""
    if alpha.base != beta.base:
        raise ValueError("predicates over different assemblies")
    if not in_subpca(hbar):
        return fails("witness mentions an oracle", hbar)
    X = alpha.base
    return first_failure(_lands(pca, hbar, lam.pair(X.name(x), q), alpha(x), fuel).because(f"at {fmt(x)}")
                 for x in X for q in sorted(beta(x), key=term_key))


def eiR_top(X: PartitionedAssembly) -> BasePredicate:
    return BasePredicate(X, {x: () for x in X})


def eiR_meet(alpha: BasePredicate, beta: BasePredicate) -> BasePredicate:
    if alpha.base != beta.base:
        raise ValueError("predicates over different assemblies")
    return BasePredicate(alpha.base, {x: set_oplus(alpha(x), beta(x)) for x in alpha.base})


def eiR_reindex(h: Morphism, beta: BasePredicate) -> BasePredicate:
    return BasePredicate(h.source, {y: beta(h(y)) for y in h.source})


def search_eiR(alpha: BasePredicate, beta: BasePredicate, pool: Iterable[Term] | None = None,
               pca: Pca = STANDARD, fuel: int = 2000) -> Term | None:
    X = alpha.base
    examples = [(lam.pair(X.name(x), q), alpha(x)) for x in X for q in beta(x)]
    return _find_term(examples, (), pool, pca, fuel)


# -- the existential completion ---------------------------------------------

class IRPredicate:
    """``(f : Y → X, α)`` with ``α`` a finite set of terms per ``y ∈ Y``."""

    __slots__ = ("display", "_alpha")

    def __init__(self, display: Morphism, alpha: Mapping | BasePredicate):
        self.display = display
        if isinstance(alpha, BasePredicate):
            if alpha.base != display.source:
                raise ValueError("predicate is not over the display's source")
            alpha = dict(alpha.items())
        self._alpha = {y: frozenset(alpha[y]) for y in display.source}

    @property
    def source(self) -> PartitionedAssembly:
        return self.display.source

    @property
    def base(self) -> PartitionedAssembly:
        return self.display.target

    def alpha(self, y) -> frozenset:
        return self._alpha[y]

    def predicate(self) -> BasePredicate:
        return BasePredicate(self.source, self._alpha)

    def __repr__(self):
        rows = ", ".join(f"{fmt(y)} -> {fmt(self.display(y))} {fmt_set(self._alpha[y])}"
                         for y in self.source)
        return f"IR[{rows}]"


@dataclass(frozen=True)
class IRWitness:
    mediator: Morphism
    ell: Term

    def __repr__(self):
        return f"IRWitness({self.mediator!r}, {fmt(self.ell)})"


def iR_leq(p: IRPredicate, q: IRPredicate, w: IRWitness, pca: Pca = STANDARD,
           fuel: int | None = None) -> Verdict:
    """``p ≤ q`` via ``w = (h, ℓ)``: ``h`` realized, ``g∘h = f`` and
    ``ℓ·⟨ψ(y), q⟩ ∈ α(y)`` for all ``y`` and ``q ∈ β(h(y))``."""
    if p.base != q.base:
        raise ValueError("predicates over different assemblies")
    h = w.mediator
    if h.source != p.source or h.target != q.source:
        return fails("mediator has the wrong domain or codomain")
    if not in_subpca(w.ell):
        return fails("ℓ mentions an oracle", w.ell)
    v = h.verify(pca, fuel)
    if not v.holds:
        return v.because("mediator")
    for y in p.source:
        if q.display(h(y)) != p.display(y):
            return fails(f"triangle does not commute at {fmt(y)}", y)
    Y = p.source
    return first_failure(_lands(pca, w.ell, lam.pair(Y.name(y), b), p.alpha(y), fuel).because(f"at {fmt(y)}")
                 for y in Y for b in sorted(q.alpha(h(y)), key=term_key))


def reflexivity(p: IRPredicate) -> IRWitness:
    return IRWitness(identity(p.source), lam.P2)


def transitivity(w1: IRWitness, w2: IRWitness) -> IRWitness:
    """From ``p ≤ q`` via ``(h₁, ℓ₁)`` and ``q ≤ s`` via ``(h₂, ℓ₂)``:
    ``(h₂∘h₁, λξ. ℓ₁⟨p₁ξ, ℓ₂⟨r₁(p₁ξ), p₂ξ⟩⟩)``."""
    ell = term("\\x. l1 <p1 x, l2 <r1 (p1 x), p2 x>>",
               l1=w1.ell, l2=w2.ell, r1=w1.mediator.realizer)
    return IRWitness(compose(w2.mediator, w1.mediator), ell)


def iR_top(X: PartitionedAssembly) -> IRPredicate:
    return IRPredicate(identity(X), {x: () for x in X})


def iR_bottom(X: PartitionedAssembly) -> IRPredicate:
    return IRPredicate(Morphism(empty(), X, {}, lam.I), {})


def bottom_witness(p: IRPredicate, ell: Term = lam.I) -> IRWitness:
    """``⊥ ≤ p``: the empty mediator; any ``ℓ`` works."""
    return IRWitness(Morphism(empty(), p.source, {}, lam.I), ell)


def top_witness(p: IRPredicate) -> IRWitness:
    """``p ≤ ⊤`` via the display itself; ``ℓ`` is never applied."""
    return IRWitness(Morphism(p.source, p.base, p.display.mapping, p.display.realizer), lam.P2)


def iR_reindex(h: Morphism, p: IRPredicate) -> IRPredicate:
    """Pull the display back along ``h : X′ → X``.  Elements are pairs
    ``(y, x′)`` named ``⟨ψ(y), φ′(x′)⟩``; the predicate is ``α(y)``."""
    P, q1, q2 = pullback(p.display, h)
    return IRPredicate(q2, {(y, x2): p.alpha(y) for y, x2 in P})


def iR_exists(f: Morphism, p: IRPredicate) -> IRPredicate:
    """Post-compose the display with ``f``."""
    return IRPredicate(compose(f, p.display), {y: p.alpha(y) for y in p.source})


def iR_meet(p: IRPredicate, q: IRPredicate) -> IRPredicate:
    """Pullback of the displays; elements ``(y, z)`` named ``⟨ψ(y), η(z)⟩``
    with predicate ``α(y) ⊕ β(z)``."""
    P, q1, q2 = pullback(p.display, q.display)
    return IRPredicate(compose(p.display, q1),
                       {(y, z): set_oplus(p.alpha(y), q.alpha(z)) for y, z in P})


MEET_LEFT_ELL = term("\\x. <true, p2 x>")
MEET_RIGHT_ELL = term("\\x. <false, p2 x>")


def meet_projections(p: IRPredicate, q: IRPredicate):
    """Witnesses of ``p∧q ≤ p`` and ``p∧q ≤ q``."""
    m = iR_meet(p, q)
    P = m.source
    w1 = IRWitness(Morphism(P, p.source, {(y, z): y for y, z in P}, lam.P1), MEET_LEFT_ELL)
    w2 = IRWitness(Morphism(P, q.source, {(y, z): z for y, z in P}, lam.P2), MEET_RIGHT_ELL)
    return m, w1, w2


MEET_MEDIATOR_ELL = "\\x. case (p1 (p2 x)) (l1 <p1 x, p2 (p2 x)>) (l2 <p1 x, p2 (p2 x)>)"


def meet_mediator(r: IRPredicate, p: IRPredicate, q: IRPredicate,
                  w1: IRWitness, w2: IRWitness) -> IRWitness:
    """From ``r ≤ p`` and ``r ≤ q`` build ``r ≤ p∧q``."""
    m = iR_meet(p, q)
    h1, h2 = w1.mediator, w2.mediator
    mapping = {e: (h1(e), h2(e)) for e in r.source}
    real = term("\\x. <a x, b x>", a=h1.realizer, b=h2.realizer)
    return IRWitness(Morphism(r.source, m.source, mapping, real),
                     term(MEET_MEDIATOR_ELL, l1=w1.ell, l2=w2.ell))


# -- joins ------------------------------------------------------------------

JOIN_ELL = "\\x. case (p1 (p1 x)) (l1 <p2 (p1 x), p2 x>) (l2 <p2 (p1 x), p2 x>)"


@dataclass
class Join:
    predicate: IRPredicate
    left: IRWitness
    right: IRWitness

    def mediate(self, w1: IRWitness, w2: IRWitness) -> IRWitness:
        """From ``p ≤ r`` via ``(k₁, ℓ₁)`` and ``q ≤ r`` via ``(k₂, ℓ₂)``:
        ``([k₁, k₂], λξ. case (p₁(p₁ξ)) (ℓ₁⟨p₂(p₁ξ), p₂ξ⟩) (ℓ₂⟨p₂(p₁ξ), p₂ξ⟩))``."""
        C = self.predicate.source
        return IRWitness(copair(w1.mediator, w2.mediator, C),
                         term(JOIN_ELL, l1=w1.ell, l2=w2.ell))


def iR_join(p: IRPredicate, q: IRPredicate) -> Join:
    C, inl, inr = coproduct(p.source, q.source)
    disp = copair(p.display, q.display, C)
    alpha = {}
    for tag, e in C:
        alpha[(tag, e)] = p.alpha(e) if tag == "inl" else q.alpha(e)
    j = IRPredicate(disp, alpha)
    return Join(j, IRWitness(inl, lam.P2), IRWitness(inr, lam.P2))


# -- implication ------------------------------------------------------------

@dataclass(frozen=True)
class ImplicationUniverse:
    """The values ``R`` and the terms ``r``, ``l`` an implication object
    may use."""

    values: tuple = (frozenset(),)
    pool: tuple = tuple(lam.COMBINATORS[n] for n in ("I", "TRUE", "FALSE", "P1", "P2"))

    def __post_init__(self):
        vals = []
        for v in self.values:
            v = frozenset(v)
            if v not in vals:
                vals.append(v)
        terms = []
        for t in self.pool:
            if t not in terms:
                terms.append(t)
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "pool", tuple(terms))

    def extended(self, values: Iterable = (), pool: Iterable[Term] = ()) -> "ImplicationUniverse":
        return ImplicationUniverse(self.values + tuple(frozenset(v) for v in values),
                                   self.pool + tuple(pool))

    @classmethod
    def for_predicates(cls, *preds: IRPredicate, pool: Iterable[Term] = ()) -> "ImplicationUniverse":
        vals = [frozenset()]
        for p in preds:
            vals.extend(p.alpha(y) for y in p.source)
        return cls(tuple(vals), cls.pool + tuple(pool))


@dataclass
class Implication:
    predicate: IRPredicate
    flags: tuple = ()

    def element(self, x, k, R, r, l):
        e = (x, k, frozenset(R), r, l)
        return e if e in self.predicate.source else None


def _realizes_on(pca, r, pairs, fuel) -> bool:
    for a, b in pairs:
        out = pca.apply(r, a, fuel=fuel)
        if not (out.converged and out.term == b):
            return False
    return True


def iR_implication(p: IRPredicate, q: IRPredicate, u: ImplicationUniverse | None = None,
                   pca: Pca = STANDARD, fuel: int | None = 2000) -> Implication:
    """Finite approximation of ``p ⇒ q``: tuples ``(x, k, R, r, l)`` with
    ``k : f⁻¹(x) → g⁻¹(x)`` realized by ``r`` and
    ``l·⟨ψ(y), q⟩ ∈ R ⊕ α(y)`` for ``y ∈ f⁻¹(x)``, ``q ∈ β(k(y))``;
    named ``⟨φ(x), ⟨r, l⟩⟩`` with predicate ``R``."""
    if p.base != q.base:
        raise ValueError("predicates over different assemblies")
    u = u or ImplicationUniverse.for_predicates(p, q)
    X = p.base
    elems = []
    for x in X:
        ys = p.display.preimage(x)
        zs = q.display.preimage(x)
        for k in functions(ys, zs):
            wanted = [(p.source.name(y), q.source.name(k(y))) for y in ys]
            rs = [r for r in u.pool if _realizes_on(pca, r, wanted, fuel)]
            if not rs:
                continue
            for R in u.values:
                checks = [(lam.pair(p.source.name(y), b), set_oplus(R, p.alpha(y)))
                          for y in ys for b in q.alpha(k(y))]
                ls = [l for l in u.pool
                      if all(_lands(pca, l, a, t, fuel).holds for a, t in checks)]
                for r in rs:
                    for l in ls:
                        elems.append(((x, k, R, r, l), lam.pair(X.name(x), lam.pair(r, l))))
    E = PartitionedAssembly(elems, check=False)
    disp = Morphism(E, X, {e: e[0] for e in E}, lam.P1)
    flags = []
    if not u.values or not u.pool:
        flags.append("empty-universe")
    if not len(E) and len(X):
        flags.append("empty-carrier")
    return Implication(IRPredicate(disp, {e: e[2] for e in E}), tuple(flags))


CURRY_REALIZER = "\\u. <h u, <\\v. r <u, v>, \\v. l <<u, p1 v>, p2 v>>>"


def _curry_parts(r: IRPredicate, p: IRPredicate, w: IRWitness, pca: Pca, fuel):
    """For each ``e``: the tuple ``m̄(e)`` and the realizer producing it."""
    m = w.mediator
    real = term(CURRY_REALIZER, h=r.display.realizer, r=m.realizer, l=w.ell)
    parts = {}
    for e in r.source:
        out = pca.apply(real, r.source.name(e), fuel=fuel)
        if not out.converged:
            raise UniverseTooSmall(f"curried realizer does not converge at {fmt(e)}", [])
        _, rl = lam.unpair(out.term)
        re, le = lam.unpair(rl)
        x = r.display(e)
        k = FMap({y: m((e, y)) for y in p.display.preimage(x)})
        parts[e] = (x, k, r.alpha(e), re, le)
    return parts, real


def curry_requirements(r: IRPredicate, p: IRPredicate, w: IRWitness, pca: Pca = STANDARD,
                       fuel: int | None = None):
    """The values and terms a universe must contain for :func:`iR_curry`."""
    parts, _ = _curry_parts(r, p, w, pca, fuel)
    values = [t[2] for t in parts.values()]
    pool = []
    for t in parts.values():
        pool.extend([t[3], t[4]])
    return values, pool


def iR_curry(r: IRPredicate, p: IRPredicate, q: IRPredicate, w: IRWitness,
             imp: Implication, pca: Pca = STANDARD, fuel: int | None = None) -> IRWitness:
    """From ``r∧p ≤ q`` via ``(m, ℓ)`` build ``r ≤ (p ⇒ q)``: ``e`` goes to
    ``(h(e), y ↦ m(e, y), γ(e), λv.r⟨ε(e), v⟩, λv.ℓ⟨⟨ε(e), p₁v⟩, p₂v⟩)``
    and the order term is ``p₂``."""
    parts, real = _curry_parts(r, p, w, pca, fuel)
    E = imp.predicate.source
    missing = [t for t in parts.values() if t not in E]
    if missing:
        raise UniverseTooSmall(f"{len(missing)} curried tuple(s) missing from the implication", missing)
    med = Morphism(r.source, E, parts, real)
    return IRWitness(med, lam.P2)


def curry_auto(r: IRPredicate, p: IRPredicate, q: IRPredicate, w: IRWitness,
               u: ImplicationUniverse | None = None, pca: Pca = STANDARD,
               fuel: int | None = 2000, retries: int = 2):
    """:func:`iR_curry`, extending the universe with whatever the curried
    tuples need when it is too small.  Returns the witness, the implication
    object it lands in and the number of extensions made."""
    u = u or ImplicationUniverse.for_predicates(p, q)
    for attempt in range(retries + 1):
        imp = iR_implication(p, q, u, pca, fuel)
        try:
            return iR_curry(r, p, q, w, imp, pca, fuel), imp, attempt
        except UniverseTooSmall:
            if attempt == retries:
                raise
            values, pool = curry_requirements(r, p, w, pca, fuel)
            u = u.extended(values, pool)


UNCURRY_REALIZER = "\\x. (p1 (p2 (rbar (p1 x)))) (p2 x)"
UNCURRY_ELL = ("\\x. (\\v. case (p1 v) <true, l <p1 (p1 x), p2 v>> v)"
               " (p2 (p2 (rbar (p1 (p1 x)))) <p2 (p1 x), p2 x>)")


def iR_uncurry(r: IRPredicate, p: IRPredicate, q: IRPredicate, w: IRWitness,
               imp: Implication) -> IRWitness:
    """From ``r ≤ (p ⇒ q)`` via ``(n, ℓ)`` build ``r∧p ≤ q``: the mediator
    is ``(e, y) ↦ π₂(n(e))(y)``."""
    n = w.mediator
    m = iR_meet(r, p)
    mapping = {}
    for e, y in m.source:
        k = n(e)[1]
        mapping[(e, y)] = k(y)
    rbar = n.realizer
    med = Morphism(m.source, q.source, mapping, term(UNCURRY_REALIZER, rbar=rbar))
    return IRWitness(med, term(UNCURRY_ELL, rbar=rbar, l=w.ell))


# -- universal quantification ----------------------------------------------

@dataclass
class Forall:
    predicate: IRPredicate
    along: Morphism
    inner: IRPredicate


def iR_forall(f: Morphism, p: IRPredicate, pool: Iterable[Term] | None = None,
              pca: Pca = STANDARD, fuel: int | None = 2000) -> Forall:
    """``∀_f p`` for ``f : Y → X`` and ``p = (g : Y′ → Y, α)``: elements
    ``(x, k, e)`` with ``k`` a section of ``g`` over ``f⁻¹(x)`` realized by
    ``e``; named ``⟨φ(x), e⟩``; predicate ``⋃_y {ψ(y)} ⊗ α(k(y))``."""
    if p.base != f.source:
        raise ValueError("predicate is not over the domain of f")
    pool = tuple(pool) if pool is not None else tuple(lam.COMBINATORS[n] for n in
                                                       ("I", "TRUE", "FALSE", "P1", "P2"))
    X, Y = f.target, f.source
    g = p.display
    elems = []
    alpha = {}
    for x in X:
        ys = f.preimage(x)
        choices = [g.preimage(y) for y in ys]
        for k in _sections(ys, choices):
            wanted = [(Y.name(y), p.source.name(k(y))) for y in ys]
            for e in pool:
                if _realizes_on(pca, e, wanted, fuel):
                    el = (x, k, e)
                    if el in alpha:
                        continue
                    elems.append((el, lam.pair(X.name(x), e)))
                    vals = frozenset()
                    for y in ys:
                        vals |= set_otimes([Y.name(y)], p.alpha(k(y)))
                    alpha[el] = vals
    E = PartitionedAssembly(elems, check=False)
    disp = Morphism(E, X, {e: e[0] for e in E}, lam.P1)
    return Forall(IRPredicate(disp, alpha), f, p)


def _sections(ys, choices):
    from itertools import product
    for combo in product(*choices):
        yield FMap(zip(ys, combo))


FORALL_DOWN_REALIZER = "\\x. (p2 (r (p1 x))) (p2 x)"
FORALL_DOWN_ELL = "\\x. l <p1 (p1 x), <p2 (p1 x), p2 x>>"
FORALL_UP_REALIZER = "\\u. <h u, \\w. r <u, w>>"
FORALL_UP_ELL = "\\u. l <<p1 u, p1 (p2 u)>, p2 (p2 u)>"


def forall_down(fa: Forall, s: IRPredicate, w: IRWitness) -> IRWitness:
    """From ``s ≤ ∀_f p`` via ``(m, ℓ)`` build ``f*(s) ≤ p`` with mediator
    ``(x′, y) ↦ π₂(m(x′))(y)``."""
    m = w.mediator
    rs = iR_reindex(fa.along, s)
    mapping = {(x2, y): m(x2)[1](y) for x2, y in rs.source}
    med = Morphism(rs.source, fa.inner.source, mapping, term(FORALL_DOWN_REALIZER, r=m.realizer))
    return IRWitness(med, term(FORALL_DOWN_ELL, l=w.ell))


def _forall_up_parts(fa: Forall, s: IRPredicate, w: IRWitness, pca: Pca, fuel):
    n = w.mediator
    real = term(FORALL_UP_REALIZER, h=s.display.realizer, r=n.realizer)
    f = fa.along
    parts = {}
    for x2 in s.source:
        out = pca.apply(real, s.source.name(x2), fuel=fuel)
        if not out.converged:
            raise UniverseTooSmall(f"transposed realizer does not converge at {fmt(x2)}", [])
        e = lam.unpair(out.term)[1]
        x = s.display(x2)
        k = FMap({y: n((x2, y)) for y in f.preimage(x)})
        parts[x2] = (x, k, e)
    return parts, real


def forall_requirements(fa: Forall, s: IRPredicate, w: IRWitness, pca: Pca = STANDARD,
                        fuel: int | None = None) -> list:
    parts, _ = _forall_up_parts(fa, s, w, pca, fuel)
    return [t[2] for t in parts.values()]


def forall_up(fa: Forall, s: IRPredicate, w: IRWitness, pca: Pca = STANDARD,
              fuel: int | None = None) -> IRWitness:
    """From ``f*(s) ≤ p`` via ``(n, ℓ′)`` build ``s ≤ ∀_f p``: ``x′`` goes to
    ``(h(x′), n(x′, −), λw.r⟨φ′(x′), w⟩)``, realized by
    ``λu.⟨r′u, λw.r⟨u, w⟩⟩``."""
    parts, real = _forall_up_parts(fa, s, w, pca, fuel)
    E = fa.predicate.source
    missing = [t for t in parts.values() if t not in E]
    if missing:
        raise PoolTooSmall(f"{len(missing)} transposed tuple(s) missing from ∀", missing)
    med = Morphism(s.source, E, parts, real)
    return IRWitness(med, term(FORALL_UP_ELL, l=w.ell))


def iR_forall_mate(direction: str, fa: Forall, s: IRPredicate, w: IRWitness,
                   pca: Pca = STANDARD, fuel: int | None = None) -> IRWitness:
    if direction == "down":
        return forall_down(fa, s, w)
    if direction == "up":
        return forall_up(fa, s, w, pca, fuel)
    raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")


# -- classification by the generic predicate -----------------------------------

class Chi:
    """``x ↦ (a ↦ {α(y) | f(y) = x, ψ(y) = a})``, evaluated on demand."""

    def __init__(self, p: IRPredicate):
        self.p = p

    def __call__(self, x) -> dict:
        out: dict = {}
        for y in self.p.display.preimage(x):
            out.setdefault(self.p.source.name(y), set()).add(self.p.alpha(y))
        return {a: frozenset(v) for a, v in out.items()}

    def at(self, x, a: Term) -> frozenset:
        return self(x).get(a, frozenset())


@dataclass
class Classified:
    chi: Chi
    canonical: IRPredicate
    to_canonical: IRWitness
    from_canonical: IRWitness


def classify(p: IRPredicate) -> Classified:
    """The canonical representative ``(x, ψ(y), α(y))`` named
    ``⟨φ(x), ψ(y)⟩`` and witnesses both ways (both with ``ℓ = p₂``)."""
    f, Y, X = p.display, p.source, p.base
    elems = []
    chosen = {}
    for y in Y:
        t = (f(y), Y.name(y), p.alpha(y))
        if t not in chosen:
            chosen[t] = y   # least y in carrier order
            elems.append((t, lam.pair(X.name(f(y)), Y.name(y))))
    Ys = PartitionedAssembly(elems, check=False)
    disp = Morphism(Ys, X, {t: t[0] for t in Ys}, lam.P1)
    canon = IRPredicate(disp, {t: t[2] for t in Ys})
    h = Morphism(Y, Ys, {y: (f(y), Y.name(y), p.alpha(y)) for y in Y},
                 term("\\x. <f x, x>", f=f.realizer))
    m = Morphism(Ys, Y, chosen, lam.P2)
    return Classified(Chi(p), canon, IRWitness(h, lam.P2), IRWitness(m, lam.P2))


# -- witness search ------------------------------------------------------------

def _find_term(examples, helpers, pool, pca, fuel, pool_limit: int | None = None) -> Term | None:
    """Synthesis first, then a scan of the pool (if given)."""
    examples = list(examples)
    syn = Synthesizer(examples, helpers, pca, fuel)
    t = syn.find()
    if t is not None:
        return t
    if pool is None:
        return None
    for i, cand in enumerate(pool):
        if pool_limit is not None and i >= pool_limit:
            break
        if in_subpca(cand) and syn.check(cand):
            return cand
    return None


def _mediators(p: IRPredicate, q: IRPredicate, limit: int):
    """Carrier maps ``h`` with ``g∘h = f`` that respect names (equal names
    go to equal names), in lexicographic order, at most ``limit``."""
    Y = list(p.source)
    options = []
    for y in Y:
        opts = q.display.preimage(p.display(y))
        if not opts:
            return
        options.append(opts)
    count = 0
    chosen: list = []
    name_map: dict = {}

    def rec(i):
        nonlocal count
        if count >= limit:
            return
        if i == len(Y):
            count += 1
            yield dict(zip(Y, chosen))
            return
        a = p.source.name(Y[i])
        for z in options[i]:
            b = q.source.name(z)
            prev = name_map.get(a)
            if prev is not None and prev != b:
                continue
            fresh = prev is None
            if fresh:
                name_map[a] = b
            chosen.append(z)
            yield from rec(i + 1)
            chosen.pop()
            if fresh:
                del name_map[a]
    yield from rec(0)


def search_iR(p: IRPredicate, q: IRPredicate, pool: Iterable[Term] | None = None,
              pca: Pca = STANDARD, fuel: int = 2000, helpers: Iterable[Term] = (),
              max_maps: int = 200, pool_limit: int | None = 2000) -> IRWitness | None:
    """Look for a witness of ``p ≤ q``: enumerate mediating carrier maps,
    then find a realizer and an ``ℓ`` for each (synthesis, then pool)."""
    if p.base != q.base:
        raise ValueError("predicates over different assemblies")
    helpers = tuple(helpers) + tuple(t for t in (p.display.realizer, q.display.realizer)
                                     if t is not None)
    pool = list(pool) if pool is not None else None
    real_cache: dict = {}
    for mapping in _mediators(p, q, max_maps):
        # membership constraints for ℓ, cheapest rejection first
        examples = [(lam.pair(p.source.name(y), b), p.alpha(y))
                    for y in p.source for b in q.alpha(mapping[y])]
        if any(not t for _, t in examples):
            continue
        key = tuple((p.source.name(y), q.source.name(mapping[y])) for y in p.source)
        if key not in real_cache:
            pairs = sorted(set(key), key=lambda ab: (term_key(ab[0]), term_key(ab[1])))
            real_cache[key] = _find_term(((a, {b}) for a, b in pairs), helpers, pool, pca,
                                         fuel, pool_limit)
        real = real_cache[key]
        if real is None:
            continue
        ell = _find_term(examples, helpers, pool, pca, fuel, pool_limit)
        if ell is None:
            continue
        w = IRWitness(Morphism(p.source, q.source, mapping, real), ell)
        if iR_leq(p, q, w, pca, fuel).holds:
            return w
    return None


def search_equiv(p: IRPredicate, q: IRPredicate, **kw):
    """Witnesses both ways, or ``None`` for a missing direction."""
    return search_iR(p, q, **kw), search_iR(q, p, **kw)
