"""Fuel-bounded reduction of closed terms, oracle tables, and the PCA facade.

Reduction is normal order: the head redex is contracted first; once the head
is stuck on a non-redex the arguments are normalised left to right.  Values
are therefore full normal forms, which makes term equality of results a
meaningful equality of algebra elements (pairs of values are themselves
syntactic pairs, numerals can be pattern-matched, and so on).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import lam
from .lam import decode_numeral, numeral, pair
from .terms import K, S, App, Atom, Oracle, Term, has_oracle, spine

DEFAULT_FUEL = 10_000

CONVERGED = "converged"
STUCK = "stuck"
EXHAUSTED = "fuel-exhausted"


@dataclass(frozen=True)
class Outcome:
    """Result of a reduction.  ``term`` is the value (converged), the stuck
    term (stuck), or the partially reduced term (fuel-exhausted)."""

    kind: str
    term: Term
    steps: int

    @property
    def converged(self) -> bool:
        return self.kind == CONVERGED

    @property
    def stuck(self) -> bool:
        return self.kind == STUCK

    @property
    def exhausted(self) -> bool:
        return self.kind == EXHAUSTED

    @property
    def value(self):
        return self.term if self.kind == CONVERGED else None

    def __str__(self):
        if self.kind == CONVERGED:
            return f"converged {self.term} ({self.steps} steps)"
        return f"{self.kind} {self.term} ({self.steps} steps)"


def _rebuild(head: Term, args) -> Term:
    t = head
    for a in args:
        t = App(t, a)
    return t


class _ArgsFrame:
    __slots__ = ("head", "args", "done")

    def __init__(self, head, args):
        self.head = head
        self.args = args
        self.done = []


class _OracleFrame:
    __slots__ = ("oracle", "rest")

    def __init__(self, oracle, rest):
        self.oracle = oracle
        self.rest = rest


def _plug(frames, t: Term) -> Term:
    for fr in reversed(frames):
        if isinstance(fr, _ArgsFrame):
            i = len(fr.done)
            t = _rebuild(fr.head, fr.done + [t] + list(fr.args[i + 1:]))
        else:
            t = _rebuild(fr.oracle, [t] + list(fr.rest))
    return t


def _normalize(t: Term, fuel: int, tables) -> Outcome:
    steps = 0
    frames: list = []
    cur = t
    while True:
        # contract head redexes, keeping the spine as a stack (first argument last)
        head, args = spine(cur)
        stack = list(reversed(args))
        while True:
            n = len(stack)
            if head == K and n >= 2:
                if steps >= fuel:
                    return Outcome(EXHAUSTED, _plug(frames, _rebuild(head, stack[::-1])), steps)
                steps += 1
                a = stack.pop()
                stack.pop()
            elif head == S and n >= 3:
                if steps >= fuel:
                    return Outcome(EXHAUSTED, _plug(frames, _rebuild(head, stack[::-1])), steps)
                steps += 1
                a, b, c = stack.pop(), stack.pop(), stack.pop()
                stack.append(App(b, c))
                stack.append(c)
            else:
                break
            head, more = spine(a)
            stack.extend(reversed(more))
        args = stack[::-1]
        if isinstance(head, Oracle) and n >= 1:
            frames.append(_OracleFrame(head, args[1:]))
            cur = args[0]
            continue
        if n:
            frames.append(_ArgsFrame(head, args))
            cur = args[0]
            continue
        value = head
        # hand the value up through the frames
        while True:
            if not frames:
                return Outcome(CONVERGED, value, steps)
            fr = frames[-1]
            if isinstance(fr, _ArgsFrame):
                fr.done.append(value)
                if len(fr.done) < len(fr.args):
                    cur = fr.args[len(fr.done)]
                    break
                frames.pop()
                value = _rebuild(fr.head, fr.done)
                continue
            frames.pop()
            table = tables.get(fr.oracle.name)
            m = decode_numeral(value)
            if table is None or m is None or m not in table:
                stuck = _rebuild(fr.oracle, [value] + list(fr.rest))
                return Outcome(STUCK, _plug(frames, stuck), steps)
            if steps >= fuel:
                return Outcome(EXHAUSTED, _plug(frames, _rebuild(fr.oracle, [value] + list(fr.rest))), steps)
            steps += 1
            cur = _rebuild(numeral(table[m]), fr.rest)
            break


def _whnf(t: Term, fuel: int, tables) -> Outcome:
    """Contract head redexes only (oracle arguments are normalised, since
    the table lookup needs a numeral)."""
    steps = 0
    cur = t
    while True:
        head, args = spine(cur)
        n = len(args)
        if (head == K and n >= 2) or (head == S and n >= 3):
            if steps >= fuel:
                return Outcome(EXHAUSTED, cur, steps)
            steps += 1
            if head == K:
                cur = _rebuild(args[0], args[2:])
            else:
                a, b, c = args[0], args[1], args[2]
                cur = _rebuild(App(App(a, c), App(b, c)), args[3:])
        elif isinstance(head, Oracle) and n >= 1:
            inner = _normalize(args[0], fuel - steps, tables)
            steps += inner.steps
            if not inner.converged:
                return Outcome(inner.kind, _rebuild(head, [inner.term] + args[1:]), steps)
            table = tables.get(head.name)
            m = decode_numeral(inner.term)
            if table is None or m is None or m not in table:
                return Outcome(STUCK, _rebuild(head, [inner.term] + args[1:]), steps)
            if steps >= fuel:
                return Outcome(EXHAUSTED, _rebuild(head, [inner.term] + args[1:]), steps)
            steps += 1
            cur = _rebuild(numeral(table[m]), args[1:])
        else:
            return Outcome(CONVERGED, cur, steps)


class _Tables(dict):
    """Hashable frozen view of the oracle tables, used as a cache key."""

    def __init__(self, frozen):
        super().__init__({name: dict(rows) for name, rows in frozen})
        self._key = frozen

    def __hash__(self):
        return hash(self._key)

    def __eq__(self, other):
        return isinstance(other, _Tables) and other._key == self._key


@lru_cache(maxsize=1 << 16)
def _reduce_cached(t: Term, fuel: int, tables: _Tables) -> Outcome:
    return _normalize(t, fuel, tables)


@lru_cache(maxsize=1 << 14)
def _whnf_cached(t: Term, fuel: int, tables: _Tables) -> Outcome:
    return _whnf(t, fuel, tables)


@dataclass(frozen=True)
class Pca:
    """The algebra: oracle tables plus a default fuel.  Immutable and
    hashable, so it can be threaded through every call."""

    oracles: tuple = ()
    fuel: int = DEFAULT_FUEL
    _tables: _Tables = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        canon = tuple(sorted(
            (name, tuple(sorted((int(m), int(k)) for m, k in dict(rows).items())))
            for name, rows in dict(self.oracles).items()
        ))
        for name, rows in canon:
            Oracle(name)  # validates the identifier
            for m, k in rows:
                if m < 0 or k < 0:
                    raise ValueError(f"oracle {name}: table entries must be naturals")
        object.__setattr__(self, "oracles", canon)
        object.__setattr__(self, "_tables", _Tables(canon))

    @classmethod
    def with_oracles(cls, tables: Mapping[str, Mapping[int, int]] | None = None,
                     fuel: int = DEFAULT_FUEL) -> "Pca":
        return cls(tuple((tables or {}).items()), fuel)

    def table(self, name: str) -> dict:
        return dict(self._tables.get(name, {}))

    def reduce(self, t: Term, fuel: int | None = None) -> Outcome:
        fuel = self.fuel if fuel is None else fuel
        if fuel < 0:
            raise ValueError("fuel must be non-negative")
        return _reduce_cached(t, fuel, self._tables)

    def apply(self, a: Term, *args: Term, fuel: int | None = None) -> Outcome:
        return self.reduce(_rebuild(a, args), fuel)

    def whnf(self, t: Term, fuel: int | None = None) -> Outcome:
        """Weak head reduction only; used for lazy observation."""
        fuel = self.fuel if fuel is None else fuel
        return _whnf_cached(t, fuel, self._tables)

    def value(self, t: Term, fuel: int | None = None):
        """The normal form of ``t`` or ``None``."""
        return self.reduce(t, fuel).value


STANDARD = Pca()


def reduce(t: Term, fuel: int = DEFAULT_FUEL, pca: Pca = STANDARD) -> Outcome:
    return pca.reduce(t, fuel)


def apply(a: Term, b: Term, fuel: int = DEFAULT_FUEL, pca: Pca = STANDARD) -> Outcome:
    return pca.reduce(App(a, b), fuel)


def set_otimes(xs: Iterable[Term], ys: Iterable[Term]) -> frozenset:
    ys = list(ys)
    return frozenset(pair(x, y) for x in xs for y in ys)


def set_oplus(xs: Iterable[Term], ys: Iterable[Term]) -> frozenset:
    return set_otimes([lam.TRUE], xs) | set_otimes([lam.FALSE], ys)


def in_subpca(t: Term) -> bool:
    return not has_oracle(t)


__all__ = [
    "Atom", "DEFAULT_FUEL", "Outcome", "Pca", "STANDARD", "apply", "in_subpca",
    "reduce", "set_oplus", "set_otimes", "numeral", "decode_numeral",
]


def is_normal(t: Term) -> bool:
    """No redex anywhere.  Oracle applications count as non-normal: they
    either reduce or are stuck."""
    stack = [t]
    while stack:
        head, args = spine(stack.pop())
        n = len(args)
        if (head == K and n >= 2) or (head == S and n >= 3) or (isinstance(head, Oracle) and n):
            return False
        stack.extend(args)
    return True
