"""Example-driven synthesis of realizers.

Given finitely many inputs, each with a set of acceptable outputs, look for
a term ``λξ.E`` that sends every input into its set.  ``E`` is assembled
from projection paths into ξ, constants, pairs and applications mirroring
the shape of the outputs, known helper terms applied to paths, and case
splits on boolean paths.  Every candidate is compiled and checked by
reduction before it is returned, so the shape analysis only has to be a good
guess, never a proof.
"""

from __future__ import annotations

from itertools import islice
from typing import Iterable, Iterator, Sequence

from . import lam
from .lam import Const, LApp, Lam, LPair, Var
from .pca import Pca, STANDARD
from .terms import App, Term, term_key

XI = "ξ"


class _Atom:
    """A candidate sub-expression with its value on every example."""

    __slots__ = ("expr", "values", "rank")

    def __init__(self, expr, values, rank):
        self.expr = expr
        self.values = values
        self.rank = rank


def _paths(inputs: Sequence[Term], depth: int) -> list[_Atom]:
    out = [_Atom(Var(XI), list(inputs), 0)]
    frontier = out[:]
    for d in range(depth):
        nxt = []
        for at in frontier:
            parts = [lam.unpair(v) for v in at.values]
            if any(p is None for p in parts):
                continue
            nxt.append(_Atom(LApp(Const(lam.P1), at.expr), [p[0] for p in parts], d + 1))
            nxt.append(_Atom(LApp(Const(lam.P2), at.expr), [p[1] for p in parts], d + 1))
        out.extend(nxt)
        frontier = nxt
    return out


class Synthesizer:
    def __init__(self, examples: Iterable, helpers: Iterable[Term] = (),
                 pca: Pca = STANDARD, fuel: int = 2000, path_depth: int = 4,
                 max_depth: int = 4):
        merged: dict = {}
        order = []
        for inp, targets in examples:
            ts = frozenset(targets)
            if inp in merged:
                merged[inp] = merged[inp] & ts
            else:
                merged[inp] = ts
                order.append(inp)
        self.inputs = order
        self.targets = [merged[i] for i in order]
        self.pca = pca
        self.fuel = fuel
        self.max_depth = max_depth
        self.atoms = _paths(self.inputs, path_depth)
        for h in helpers:
            for p in list(self.atoms):
                vals = []
                for v in p.values:
                    out = pca.apply(h, v, fuel=fuel)
                    if not out.converged:
                        break
                    vals.append(out.term)
                else:
                    self.atoms.append(_Atom(LApp(Const(h), p.expr), vals, 10 + p.rank))
        self.atoms.sort(key=lambda a: a.rank)

    # candidate expressions for targets indexed like self.inputs (a sublist
    # given by idx)
    def _solve(self, idx: tuple, targets: list, depth: int) -> Iterator:
        if any(not t for t in targets):
            return
        # atoms: projections and helpers
        for at in self.atoms:
            if all(at.values[i] in t for i, t in zip(idx, targets)):
                yield at.expr, [at.values[i] for i in idx]
        common = frozenset.intersection(*targets) if targets else frozenset()
        for c in sorted(common, key=term_key)[:2]:
            yield Const(c), [c] * len(idx)
        if depth == 0:
            return
        # pairs
        firsts = []
        for t in targets:
            ps = [lam.unpair(u) for u in t]
            firsts.append([p for p in ps if p is not None])
        if all(firsts):
            a_targets = [frozenset(p[0] for p in f) for f in firsts]
            for e1, v1 in islice(self._solve(idx, a_targets, depth - 1), 4):
                b_targets = [frozenset(p[1] for p in f if p[0] == v)
                             for f, v in zip(firsts, v1)]
                for e2, v2 in islice(self._solve(idx, b_targets, depth - 1), 4):
                    yield LPair(e1, e2), [lam.pair(a, b) for a, b in zip(v1, v2)]
        # applications (normal, so the application is its own value)
        apps = [[u for u in t if isinstance(u, App) and lam.unpair(u) is None] for t in targets]
        if all(apps):
            f_targets = [frozenset(u.fun for u in a) for a in apps]
            for e1, v1 in islice(self._solve(idx, f_targets, depth - 1), 3):
                x_targets = [frozenset(u.arg for u in a if u.fun == v) for a, v in zip(apps, v1)]
                for e2, v2 in islice(self._solve(idx, x_targets, depth - 1), 3):
                    yield LApp(e1, e2), [App(a, b) for a, b in zip(v1, v2)]
        # case split on a boolean path
        if len(idx) > 1:
            for at in self.atoms:
                if at.rank >= 10:
                    continue
                vals = [at.values[i] for i in idx]
                if not all(v == lam.TRUE or v == lam.FALSE for v in vals):
                    continue
                if all(v == vals[0] for v in vals):
                    continue
                yes = [k for k, v in enumerate(vals) if v == lam.TRUE]
                no = [k for k, v in enumerate(vals) if v != lam.TRUE]
                sy = next(self._solve(tuple(idx[k] for k in yes), [targets[k] for k in yes], depth - 1), None)
                if sy is None:
                    continue
                sn = next(self._solve(tuple(idx[k] for k in no), [targets[k] for k in no], depth - 1), None)
                if sn is None:
                    continue
                values = [None] * len(idx)
                for k, v in zip(yes, sy[1]):
                    values[k] = v
                for k, v in zip(no, sn[1]):
                    values[k] = v
                yield (LApp(LApp(LApp(Const(lam.CASE), at.expr), sy[0]), sn[0]), values)
                break

    def check(self, t: Term) -> bool:
        for inp, ts in zip(self.inputs, self.targets):
            out = self.pca.apply(t, inp, fuel=self.fuel)
            if not (out.converged and out.term in ts):
                return False
        return True

    def candidates(self, limit: int = 64) -> Iterator[Term]:
        if not self.inputs:
            yield lam.I
            return
        seen = set()
        idx = tuple(range(len(self.inputs)))
        for e, _ in islice(self._solve(idx, self.targets, self.max_depth), limit):
            t = lam.compile_lambda(Lam(XI, e))
            if t not in seen:
                seen.add(t)
                yield t

    def find(self, limit: int = 64) -> Term | None:
        for t in self.candidates(limit):
            if self.check(t):
                return t
        return None


def synthesize(examples: Iterable, helpers: Iterable[Term] = (), pca: Pca = STANDARD,
               fuel: int = 2000, limit: int = 64) -> Term | None:
    """``examples``: pairs ``(input, acceptable outputs)``."""
    return Synthesizer(examples, helpers, pca, fuel).find(limit)


def synthesize_map(pairs: Iterable, helpers: Iterable[Term] = (), pca: Pca = STANDARD,
                   fuel: int = 2000) -> Term | None:
    """Equality version: ``pairs`` of ``(input, required output)``."""
    return synthesize(((a, {b}) for a, b in pairs), helpers, pca, fuel)
