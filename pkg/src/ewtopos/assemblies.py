"""Finite partitioned assemblies, realized morphisms and the finite limits
and colimits the doctrines need.

A partitioned assembly is a finite ordered carrier with one name (a normal
term) per element.  A morphism is a carrier map together with a realizer: an
oracle-free term sending the name of every element to the name of its image.
"""

from __future__ import annotations

from itertools import product as _cartesian
from typing import Callable, Iterable, Iterator, Mapping

from . import lam
from .gen import sk_terms
from .pca import Pca, STANDARD, in_subpca, is_normal
from .syntax import term
from .terms import Term
from .util import FMap, fmt, sort_elements
from .verdict import Verdict, fails, holds, unknown


class AssemblyError(ValueError):
    pass


class PartitionedAssembly:
    """Carrier order is the order the names were given in."""

    __slots__ = ("carrier", "_names", "_index", "_hash")

    def __init__(self, names: Mapping | Iterable = (), check: bool = True):
        items = list(names.items()) if isinstance(names, Mapping) else list(names)
        self.carrier = tuple(x for x, _ in items)
        self._names = dict(items)
        if len(self._names) != len(self.carrier):
            raise AssemblyError("duplicate carrier element")
        if check:
            for x, t in items:
                if not isinstance(t, Term):
                    raise AssemblyError(f"name of {fmt(x)} is not a term")
                if not is_normal(t):
                    raise AssemblyError(f"name of {fmt(x)} is not in normal form: {t}")
        self._index = {x: i for i, x in enumerate(self.carrier)}
        self._hash = hash(tuple(items))

    def name(self, x) -> Term:
        try:
            return self._names[x]
        except KeyError:
            raise AssemblyError(f"{fmt(x)} is not in the carrier") from None

    def items(self):
        return [(x, self._names[x]) for x in self.carrier]

    def index(self, x) -> int:
        return self._index[x]

    def __iter__(self):
        return iter(self.carrier)

    def __len__(self):
        return len(self.carrier)

    def __contains__(self, x):
        return x in self._names

    def __eq__(self, other):
        return (isinstance(other, PartitionedAssembly) and self.carrier == other.carrier
                and self._names == other._names)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{fmt(x)}: {fmt(t)}" for x, t in self.items())
        return f"ParAsm{{{inner}}}"


class Assembly:
    """A finite assembly: every element has a nonempty finite set of
    realizers."""

    def __init__(self, realizers: Mapping):
        self.carrier = tuple(realizers)
        self._real = {x: frozenset(ts) for x, ts in realizers.items()}
        for x, ts in self._real.items():
            if not ts:
                raise AssemblyError(f"{fmt(x)} has no realizer")

    def realizers(self, x) -> frozenset:
        return self._real[x]

    def realizes(self, s: Term, x) -> bool:
        return s in self._real[x]

    def __iter__(self):
        return iter(self.carrier)

    def __len__(self):
        return len(self.carrier)

    @classmethod
    def from_partitioned(cls, X: PartitionedAssembly) -> "Assembly":
        return cls({x: {X.name(x)} for x in X})


class Morphism:
    """A carrier map between partitioned assemblies with a (claimed)
    realizer.  Construction checks the map; :meth:`verify` checks the
    realizer."""

    __slots__ = ("source", "target", "_map", "realizer")

    def __init__(self, source: PartitionedAssembly, target: PartitionedAssembly,
                 mapping: Mapping | Callable, realizer: Term | None = None):
        if callable(mapping) and not isinstance(mapping, Mapping):
            mapping = {x: mapping(x) for x in source}
        m = dict(mapping)
        for x in source:
            if x not in m:
                raise AssemblyError(f"map is not total: no image for {fmt(x)}")
            if m[x] not in target:
                raise AssemblyError(f"image {fmt(m[x])} of {fmt(x)} is not in the target")
        self.source = source
        self.target = target
        self._map = {x: m[x] for x in source}
        self.realizer = realizer

    def __call__(self, x):
        return self._map[x]

    @property
    def mapping(self) -> dict:
        return dict(self._map)

    def items(self):
        return list(self._map.items())

    def preimage(self, z) -> list:
        return [x for x in self.source if self._map[x] == z]

    def image(self) -> list:
        seen = []
        for x in self.source:
            if self._map[x] not in seen:
                seen.append(self._map[x])
        return seen

    def with_realizer(self, r: Term) -> "Morphism":
        return Morphism(self.source, self.target, self._map, r)

    def verify(self, pca: Pca = STANDARD, fuel: int | None = None) -> Verdict:
        if self.realizer is None:
            return unknown("no realizer given")
        return verify_morphism(self.source, self.target, self._map, self.realizer, pca, fuel)

    def same_map(self, other: "Morphism") -> bool:
        return (self.source == other.source and self.target == other.target
                and self._map == other._map)

    def __repr__(self):
        inner = ", ".join(f"{fmt(x)} -> {fmt(y)}" for x, y in self._map.items())
        r = f" by {fmt(self.realizer)}" if self.realizer is not None else ""
        return f"Morphism[{inner}]{r}"


def _check_app(pca: Pca, r: Term, arg: Term, expected, fuel) -> Verdict:
    out = pca.apply(r, arg, fuel=fuel)
    if out.converged:
        if out.term == expected:
            return holds()
        return fails(f"gave {fmt(out.term)}, expected {fmt(expected)}", out.term)
    if out.stuck:
        return fails(f"stuck at {fmt(out.term)}")
    return unknown(f"fuel exhausted after {out.steps} steps")


def verify_morphism(src: PartitionedAssembly, tgt: PartitionedAssembly, mapping,
                    candidate: Term, pca: Pca = STANDARD, fuel: int | None = None) -> Verdict:
    """holds / fails (first offending element) / unknown (fuel)."""
    if not in_subpca(candidate):
        return fails("realizer mentions an oracle", candidate)
    if callable(mapping) and not isinstance(mapping, Mapping):
        mapping = {x: mapping(x) for x in src}
    pending = None
    for x in src:
        v = _check_app(pca, candidate, src.name(x), tgt.name(mapping[x]), fuel)
        if v.fails:
            return Verdict(v.status, f"at {fmt(x)}: {v.reason}", x)
        if v.unknown and pending is None:
            pending = Verdict(v.status, f"at {fmt(x)}: {v.reason}", x)
    return pending if pending is not None else holds()


# -- search pool -------------------------------------------------------------

CURATED = (lam.I, lam.TRUE, lam.FALSE, lam.PAIR, lam.P1, lam.P2, lam.CASE)

DEFAULT_POOL_LEAVES = 7
SEARCH_FUEL = 1000


class Pool:
    """Curated library terms, then registered terms, then every S/K term
    with at most ``max_leaves`` leaves in size-then-text order.  Duplicates
    are skipped; iteration is lazy and deterministic."""

    def __init__(self, registered: Iterable[Term] = (), max_leaves: int = DEFAULT_POOL_LEAVES,
                 curated: bool = True):
        self.registered = tuple(registered)
        self.max_leaves = max_leaves
        self.curated = curated

    def __iter__(self) -> Iterator[Term]:
        seen = set()
        heads = (CURATED if self.curated else ()) + self.registered
        for t in heads:
            if t not in seen:
                seen.add(t)
                yield t
        for t in sk_terms(self.max_leaves):
            if t not in seen:
                seen.add(t)
                yield t

    def extended(self, extra: Iterable[Term]) -> "Pool":
        return Pool(self.registered + tuple(extra), self.max_leaves, self.curated)

    def __repr__(self):
        return f"Pool(registered={len(self.registered)}, max_leaves={self.max_leaves})"


def search_realizer(src: PartitionedAssembly, tgt: PartitionedAssembly, mapping,
                    pool: Iterable[Term] | None = None, pca: Pca = STANDARD,
                    fuel: int | None = SEARCH_FUEL) -> Term | None:
    """First pool element that verifies as a realizer of ``mapping``."""
    if pool is None:
        pool = Pool()
    if callable(mapping) and not isinstance(mapping, Mapping):
        mapping = {x: mapping(x) for x in src}
    # the distinct (input name, output name) constraints are all that matter
    constraints = []
    for x in src:
        c = (src.name(x), tgt.name(mapping[x]))
        if c not in constraints:
            constraints.append(c)
    names_in = [a for a, _ in constraints]
    if len(set(names_in)) != len(names_in):
        return None  # one name, two required outputs
    for cand in pool:
        if not in_subpca(cand):
            continue
        for a, b in constraints:
            out = pca.apply(cand, a, fuel=fuel)
            if not (out.converged and out.term == b):
                break
        else:
            return cand
    return None


# -- constructions -------------------------------------------------------------

def identity(X: PartitionedAssembly) -> Morphism:
    return Morphism(X, X, {x: x for x in X}, lam.I)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g ∘ f``, realized by ``λξ. g (f ξ)``."""
    if f.target != g.source:
        raise AssemblyError("cannot compose: codomain and domain differ")
    r = None
    if f.realizer is not None and g.realizer is not None:
        r = term("\\x. g (f x)", g=g.realizer, f=f.realizer)
    return Morphism(f.source, g.target, {x: g(f(x)) for x in f.source}, r)


def empty() -> PartitionedAssembly:
    return PartitionedAssembly(())


TERMINAL_POINT = "*"


def terminal() -> PartitionedAssembly:
    return PartitionedAssembly([(TERMINAL_POINT, lam.I)])


def bang(X: PartitionedAssembly, one: PartitionedAssembly | None = None) -> Morphism:
    one = one or terminal()
    (pt,) = one.carrier
    return Morphism(X, one, {x: pt for x in X}, term("\\x. n", n=one.name(pt)))


def from_empty(X: PartitionedAssembly) -> Morphism:
    return Morphism(empty(), X, {}, lam.I)


def product(X: PartitionedAssembly, Y: PartitionedAssembly):
    """``(X×Y, π₁, π₂)``; elements are pairs ``(x, y)`` in lexicographic order."""
    P = PartitionedAssembly([((x, y), lam.pair(X.name(x), Y.name(y))) for x in X for y in Y])
    p1 = Morphism(P, X, {(x, y): x for x, y in P}, lam.P1)
    p2 = Morphism(P, Y, {(x, y): y for x, y in P}, lam.P2)
    return P, p1, p2


def pairing(f: Morphism, g: Morphism, P: PartitionedAssembly | None = None) -> Morphism:
    """``⟨f, g⟩ : Z → X×Y`` realized by ``λξ.⟨f ξ, g ξ⟩``."""
    if P is None:
        P = product(f.target, g.target)[0]
    r = None
    if f.realizer is not None and g.realizer is not None:
        r = term("\\x. <f x, g x>", f=f.realizer, g=g.realizer)
    return Morphism(f.source, P, {z: (f(z), g(z)) for z in f.source}, r)


INL, INR = "inl", "inr"
INL_REALIZER = term("\\x. <true, x>")
INR_REALIZER = term("\\x. <false, x>")


def coproduct(Y: PartitionedAssembly, Z: PartitionedAssembly):
    """``(Y+Z, inl, inr)``; elements ``("inl", y)`` then ``("inr", z)``,
    named ``⟨true, ψ(y)⟩`` and ``⟨false, η(z)⟩``."""
    C = PartitionedAssembly(
        [((INL, y), lam.pair(lam.TRUE, Y.name(y))) for y in Y]
        + [((INR, z), lam.pair(lam.FALSE, Z.name(z))) for z in Z])
    inl = Morphism(Y, C, {y: (INL, y) for y in Y}, INL_REALIZER)
    inr = Morphism(Z, C, {z: (INR, z) for z in Z}, INR_REALIZER)
    return C, inl, inr


def copair(f: Morphism, g: Morphism, C: PartitionedAssembly | None = None) -> Morphism:
    """``[f, g] : Y+Z → X`` realized by
    ``λξ. case (p1 ξ) (f (p2 ξ)) (g (p2 ξ))``."""
    if f.target != g.target:
        raise AssemblyError("copairing needs a common codomain")
    if C is None:
        C = coproduct(f.source, g.source)[0]
    r = None
    if f.realizer is not None and g.realizer is not None:
        r = term("\\x. case (p1 x) (f (p2 x)) (g (p2 x))", f=f.realizer, g=g.realizer)
    mapping = {}
    for tag, e in C:
        mapping[(tag, e)] = f(e) if tag == INL else g(e)
    return Morphism(C, f.target, mapping, r)


def pullback(f: Morphism, g: Morphism):
    """``P = {(y, e) | f(y) = g(e)}`` named ``⟨ψ(y), ε(e)⟩``, with its two
    projections (realized by ``p1`` and ``p2``)."""
    if f.target != g.target:
        raise AssemblyError("pullback needs a common codomain")
    P = PartitionedAssembly([((y, e), lam.pair(f.source.name(y), g.source.name(e)))
                             for y in f.source for e in g.source if f(y) == g(e)])
    q1 = Morphism(P, f.source, {(y, e): y for y, e in P}, lam.P1)
    q2 = Morphism(P, g.source, {(y, e): e for y, e in P}, lam.P2)
    return P, q1, q2


def fibre(f: Morphism, x) -> list:
    return f.preimage(x)


def functions(dom: list, cod: list) -> Iterator[FMap]:
    """All set-functions ``dom → cod`` as :class:`FMap` values, in the
    lexicographic order of their value tuples."""
    for values in _cartesian(cod, repeat=len(dom)):
        yield FMap(zip(dom, values))


def sub_assembly(X: PartitionedAssembly, elements: Iterable) -> PartitionedAssembly:
    keep = set(elements)
    return PartitionedAssembly([(x, X.name(x)) for x in X if x in keep], check=False)


def canonical(X: PartitionedAssembly) -> PartitionedAssembly:
    """Same assembly with the carrier in canonical element order."""
    return PartitionedAssembly([(x, X.name(x)) for x in sort_elements(X)], check=False)


# -- predicates over assemblies -------------------------------------------------

class Partitioned:
    """Result of :func:`partition_predicate`: the partitioned assembly, its
    predicate, and the two reductions as ``(l1, l2)`` term pairs."""

    def __init__(self, assembly, alpha, forward, backward, backward_literal):
        self.assembly = assembly
        self.alpha = alpha
        self.forward = forward
        self.backward = backward
        self.backward_literal = backward_literal


# second component of the pair, then its first: l2 <s, <q, s>> = q
PARTITION_FORWARD_L2 = term("\\x. p1 (p2 x)")
# <s, q> must land in {<q, s>}: swap the pair
PARTITION_BACKWARD_L2 = term("\\x. <p2 x, p1 x>")


def partition_predicate(X: Assembly, phi: Mapping) -> Partitioned:
    """Replace a predicate on an assembly by an equivalent one on a
    partitioned assembly: elements ``(x, s)`` for ``s ⊩ x``, named ``s``,
    with ``α(x, s) = {⟨q, s⟩ | q ∈ φ(x)}``.

    The identity as second witness of ``α ≤ φ`` is also returned (as
    ``backward_literal``); it only works when ``q = s``, so the swap is the
    witness actually used."""
    from .terms import term_key
    elems = []
    for x in X:
        for s in sorted(X.realizers(x), key=term_key):
            elems.append(((x, s), s))
    Xp = PartitionedAssembly(elems)
    alpha = {(x, s): frozenset(lam.pair(q, s) for q in phi[x]) for x, s in Xp}
    return Partitioned(Xp, alpha,
                       forward=(lam.I, PARTITION_FORWARD_L2),
                       backward=(lam.I, PARTITION_BACKWARD_L2),
                       backward_literal=(lam.I, lam.I))


def instance_reducible(X: Assembly, phi: Mapping, Y: Assembly, psi: Mapping,
                       l1: Term, l2: Term, pca: Pca = STANDARD,
                       fuel: int | None = None) -> Verdict:
    """``φ`` on ``X`` instance-reduces to ``ψ`` on ``Y`` via ``(l1, l2)``:
    for every ``s ⊩ x``, ``l1·s`` realizes some ``y`` such that
    ``l2·⟨s, p⟩ ∈ φ(x)`` for every ``p ∈ ψ(y)``."""
    if not (in_subpca(l1) and in_subpca(l2)):
        return fails("witness mentions an oracle")
    pending = None
    for x in X:
        for s in sort_elements(X.realizers(x)):
            out = pca.apply(l1, s, fuel=fuel)
            if not out.converged:
                v = (unknown if out.exhausted else fails)(f"l1 on {fmt(s)}: {out.kind}", (x, s))
                if v.fails:
                    return v
                pending = pending if pending is not None else v
                continue
            found = False
            maybe = False
            for y in Y:
                if not Y.realizes(out.term, y):
                    continue
                ok = True
                for p in sort_elements(psi[y]):
                    o2 = pca.apply(l2, lam.pair(s, p), fuel=fuel)
                    if o2.exhausted:
                        maybe = True
                        ok = False
                        break
                    if not (o2.converged and o2.term in phi[x]):
                        ok = False
                        break
                if ok:
                    found = True
                    break
            if not found:
                if maybe:
                    pending = pending if pending is not None else unknown(f"at {fmt(x)}, {fmt(s)}: fuel exhausted", (x, s))
                else:
                    return fails(f"no suitable instance for {fmt(x)} realized by {fmt(s)}", (x, s))
    return pending if pending is not None else holds()
