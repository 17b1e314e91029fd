"""Extended Weihrauch reducibility between degrees over the PCA alone.

A degree is a finite map ``p ↦ f(p)`` from instance terms to non-empty
finite sets of finite sets of terms; ``f`` is reducible to ``g`` via
``(ℓ₁, ℓ₂)`` when for every ``p`` in the support of ``f``, ``ℓ₁·p`` is in
the support of ``g`` and every ``A ∈ f(p)`` has some ``B ∈ g(ℓ₁·p)`` with
``ℓ₂·⟨p, q⟩ ∈ A`` for all ``q ∈ B``.

This module deliberately shares nothing with :mod:`ewtopos.weihrauch`
beyond reduction itself: it is the reference the terminal fibre is checked
against.  The translations below move witnesses between the two settings,
where the fibre over the one-point assembly tags instances as ``⟨I, p⟩``.
"""

from __future__ import annotations

from typing import Mapping

from . import lam
from .assemblies import TERMINAL_POINT, terminal
from .pca import Pca, STANDARD, in_subpca
from .syntax import term
from .terms import Term, term_key
from .verdict import Verdict, fails, holds, unknown


def degree(entries: Mapping) -> dict:
    """Normalise ``{p: [[q, ...], ...]}``, dropping empty outer sets."""
    out = {}
    for p, outer in entries.items():
        outer = frozenset(frozenset(A) for A in outer)
        if outer:
            out[p] = outer
    return out


def reducible(f: Mapping, g: Mapping, ell1: Term, ell2: Term, pca: Pca = STANDARD,
              fuel: int | None = None) -> Verdict:
    if not (in_subpca(ell1) and in_subpca(ell2)):
        return fails("witness mentions an oracle")
    pending = None
    for p in sorted(f, key=term_key):
        out = pca.apply(ell1, p, fuel=fuel)
        if out.exhausted:
            pending = pending if pending is not None else unknown(f"forward map out of fuel on {p}")
            continue
        if not out.converged or not g.get(out.term):
            return fails(f"no instance of the target for {p}", p)
        targets = sorted(g[out.term], key=lambda B: sorted(map(term_key, B)))
        for A in sorted(f[p], key=lambda A: sorted(map(term_key, A))):
            found, maybe = False, False
            for B in targets:
                good = True
                for q in B:
                    o2 = pca.apply(ell2, lam.pair(p, q), fuel=fuel)
                    if o2.exhausted:
                        maybe = True
                    if not (o2.converged and o2.term in A):
                        good = False
                        break
                if good:
                    found = True
                    break
            if not found:
                if not maybe:
                    return fails(f"no solution set for {p} covers the required one", p)
                pending = pending if pending is not None else unknown(f"backward map out of fuel on {p}")
    return pending if pending is not None else holds()


# -- passing between degrees and the fibre over the one-point assembly --------

def to_fibre(f: Mapping):
    """The extended predicate over the one-point assembly with the same
    tags."""
    from .weihrauch import EWPredicate
    return EWPredicate(terminal(), {(TERMINAL_POINT, p): v for p, v in f.items()})


def from_fibre(g) -> dict:
    return {a: v for (_, a), v in g.items()}


def witness_to_fibre(ell1: Term, ell2: Term):
    """``(ℓ₁, ℓ₂)`` for degrees becomes ``(λξ. ℓ₁(p₂ξ), λξ. ℓ₂⟨p₂(p₁ξ), p₂ξ⟩)``."""
    from .weihrauch import EWWitness
    return EWWitness(term("\\x. l (p2 x)", l=ell1),
                     term("\\x. l <p2 (p1 x), p2 x>", l=ell2))


def witness_from_fibre(w) -> tuple:
    """The fibre witness read on degrees: instances are re-tagged with the
    name ``I`` of the point."""
    return (term("\\p. l <I, p>", l=w.ell1),
            term("\\x. l <<I, p1 x>, p2 x>", l=w.ell2))
