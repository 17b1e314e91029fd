"""Seeded random instances for the law suites and property tests.

Carriers are named by numerals so that every set map between them has a
realizer: :func:`numeral_table` builds it by case analysis on the numeral.
Predicate sources may repeat names, in which case the display is chosen
constant on each name class.
"""

from __future__ import annotations

import random
from typing import Mapping

from . import lam
from .assemblies import Morphism, PartitionedAssembly
from .instance import IRPredicate
from .lam import Const, LApp, Lam, Var
from .terms import K, S, Term
from .weihrauch import EWPredicate

VALUES = (K, S, lam.I, lam.TRUE, lam.FALSE, lam.numeral(0), lam.numeral(1), lam.pair(K, S))
TAGS = (lam.numeral(0), lam.numeral(1), lam.numeral(2), K, S)


def numeral_table(table: Mapping[int, Term]) -> Term:
    """A term sending ``numeral(n)`` to ``table[n]`` for each key ``n``.
    Other inputs get whatever the case analysis happens to produce."""
    if not table:
        return lam.I
    top = max(table)
    default = next(iter(table.values()))
    x = Var("x")

    def body(e, k):
        out = Const(table.get(k, default))
        if k == top:
            return out
        case = LApp(LApp(LApp(Const(lam.CASE), LApp(Const(lam.P1), e)), out),
                    body(LApp(Const(lam.P2), e), k + 1))
        return case
    return lam.compile_lambda(Lam("x", body(x, 0)))


def assembly(rng: random.Random, n: int, prefix: str = "x") -> PartitionedAssembly:
    """``n`` elements named by distinct numerals (in shuffled order)."""
    nums = list(range(n))
    rng.shuffle(nums)
    return PartitionedAssembly([(f"{prefix}{i}", lam.numeral(k)) for i, k in enumerate(nums)])


def names_as_numbers(X: PartitionedAssembly) -> dict:
    return {x: lam.decode_numeral(X.name(x)) for x in X}


def morphism(rng: random.Random, X: PartitionedAssembly, Y: PartitionedAssembly,
             mapping: Mapping | None = None) -> Morphism:
    """A random (or the given) map ``X → Y`` with a table realizer.  Elements
    of ``X`` sharing a name are sent to the same place."""
    nums = names_as_numbers(X)
    if mapping is None:
        by_name = {}
        mapping = {}
        targets = list(Y)
        for x in X:
            k = nums[x]
            if k not in by_name:
                by_name[k] = rng.choice(targets)
            mapping[x] = by_name[k]
    table = {nums[x]: Y.name(mapping[x]) for x in X}
    return Morphism(X, Y, mapping, numeral_table(table))


def value_set(rng: random.Random, max_size: int = 2) -> frozenset:
    return frozenset(rng.sample(VALUES, rng.randint(0, max_size)))


def ir_predicate(rng: random.Random, X: PartitionedAssembly, max_source: int = 3,
                 max_names: int = 3, prefix: str = "y") -> IRPredicate:
    """A random display into ``X`` (possibly empty source; names may repeat
    across the source) with random value sets."""
    n = rng.randint(0, max_source)
    items = [(f"{prefix}{i}", lam.numeral(rng.randrange(max_names))) for i in range(n)]
    Y = PartitionedAssembly(items)
    if not len(X):
        Y = PartitionedAssembly([])
    f = morphism(rng, Y, X)
    return IRPredicate(f, {y: value_set(rng) for y in Y})


def ew_predicate(rng: random.Random, X: PartitionedAssembly, max_support: int = 3) -> EWPredicate:
    sup = {}
    for _ in range(rng.randint(0, max_support)):
        if not len(X):
            break
        x = rng.choice(list(X))
        a = rng.choice(TAGS)
        outer = [value_set(rng) for _ in range(rng.randint(1, 2))]
        sup.setdefault((x, a), []).extend(outer)
    return EWPredicate(X, sup)


def degree(rng: random.Random, max_support: int = 3) -> dict:
    sup = {}
    for _ in range(rng.randint(0, max_support)):
        a = rng.choice(TAGS)
        outer = [value_set(rng) for _ in range(rng.randint(1, 2))]
        sup.setdefault(a, set()).update(outer)
    return {a: frozenset(v) for a, v in sup.items()}
