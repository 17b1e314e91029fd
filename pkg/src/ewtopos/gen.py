"""Deterministic generators: enumeration of S/K terms and seeded random
terms and λ-expressions.  Generators for assemblies and predicates live next
to the law suites that use them."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import islice
from typing import Iterator

from . import lam
from .lam import Const, LApp, Lam, LambdaExpr, LPair, Var
from .terms import K, S, App, Term


@lru_cache(maxsize=None)
def sk_terms_with_leaves(n: int) -> tuple[Term, ...]:
    """All S/K terms with exactly ``n`` leaves, in raw-text order."""
    if n == 1:
        return (K, S)
    out = []
    for i in range(1, n):
        for f in sk_terms_with_leaves(i):
            for a in sk_terms_with_leaves(n - i):
                out.append(App(f, a))
    return tuple(sorted(out, key=str))


def sk_terms(max_leaves: int) -> Iterator[Term]:
    """All S/K terms with at most ``max_leaves`` leaves, smallest first."""
    for n in range(1, max_leaves + 1):
        yield from sk_terms_with_leaves(n)


def random_sk_term(rng: random.Random, max_size: int) -> Term:
    """A random S/K term with at most ``max_size`` nodes."""
    leaves = rng.randint(1, (max_size + 1) // 2)
    return _random_tree(rng, leaves)


def _random_tree(rng: random.Random, leaves: int) -> Term:
    if leaves == 1:
        return rng.choice((S, K))
    left = rng.randint(1, leaves - 1)
    return App(_random_tree(rng, left), _random_tree(rng, leaves - left))


_CONSTANTS = (S, K, lam.I, lam.FALSE, lam.P1, lam.P2)


def random_lambda(rng: random.Random, depth: int = 5, scope: tuple = ()) -> LambdaExpr:
    """A random closed λ-expression of depth at most ``depth``."""
    if depth <= 1:
        if scope and rng.random() < 0.7:
            return Var(rng.choice(scope))
        return Const(rng.choice(_CONSTANTS))
    r = rng.random()
    if r < 0.15:
        return random_lambda(rng, 1, scope)
    if r < 0.45:
        name = f"v{len(scope)}"
        return Lam(name, random_lambda(rng, depth - 1, scope + (name,)))
    if r < 0.9:
        return LApp(random_lambda(rng, depth - 1, scope), random_lambda(rng, depth - 1, scope))
    return LPair(random_lambda(rng, depth - 1, scope), random_lambda(rng, depth - 1, scope))


def sample(it, n: int) -> list:
    return list(islice(it, n))
