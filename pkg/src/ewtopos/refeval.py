"""An environment-based, call-by-need evaluator for λ-expressions.

It shares nothing with bracket abstraction or with the term reducer: variables
live in environments, abstractions evaluate to closures, and S/K/oracles are
handled by their own δ-rules on spines of thunks.  It is the independent
oracle against which compiled terms are checked.

Agreement between a compiled term and a value of this evaluator is
observational (see :class:`Agreement`).
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from dataclasses import dataclass

from . import lam
from .lam import Const, LApp, Lam, LambdaExpr, LPair, Var
from .pca import Pca, STANDARD
from .terms import K, S, App, Oracle, Term, spine


class OutOfFuel(Exception):
    pass


class Stuck(Exception):
    pass


class _Meter:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def tick(self):
        if self.left <= 0:
            raise OutOfFuel
        self.left -= 1


class Thunk:
    __slots__ = ("_fn", "_value", "_done")

    def __init__(self, fn=None, value=None):
        self._fn = fn
        self._value = value
        self._done = fn is None

    def force(self):
        if not self._done:
            self._value = self._fn()
            self._done = True
            self._fn = None
        return self._value


@dataclass
class Closure:
    var: str
    body: LambdaExpr
    env: dict


@dataclass
class Neutral:
    head: Term          # an Atom or Oracle
    args: tuple         # thunks


class Evaluator:
    def __init__(self, pca: Pca = STANDARD, fuel: int = 2000):
        self.pca = pca
        self.meter = _Meter(fuel)

    def eval(self, e: LambdaExpr, env: dict):
        if isinstance(e, Var):
            return env[e.name].force()
        if isinstance(e, Const):
            return self.eval_term(e.term)
        if isinstance(e, Lam):
            return Closure(e.var, e.body, env)
        if isinstance(e, LApp):
            f = self.eval(e.fn, env)
            return self.apply(f, Thunk(lambda: self.eval(e.arg, env)))
        if isinstance(e, LPair):
            # λz. z l r with l, r captured lazily
            inner = dict(env)
            inner[" l"] = Thunk(lambda: self.eval(e.left, env))
            inner[" r"] = Thunk(lambda: self.eval(e.right, env))
            return Closure(" z", LApp(LApp(Var(" z"), Var(" l")), Var(" r")), inner)
        raise TypeError(e)

    def eval_term(self, t: Term):
        head, args = spine(t)
        return self.spine_apply(head, [Thunk(self._term_fn(a)) for a in args])

    def _term_fn(self, t: Term):
        return lambda: self.eval_term(t)

    def apply(self, f, arg: Thunk):
        if isinstance(f, Closure):
            self.meter.tick()
            env = dict(f.env)
            env[f.var] = arg
            return self.eval(f.body, env)
        return self.spine_apply(f.head, list(f.args) + [arg])

    def spine_apply(self, head: Term, args: list):
        if head == K and len(args) >= 2:
            self.meter.tick()
            v = args[0].force()
            for a in args[2:]:
                v = self.apply(v, a)
            return v
        if head == S and len(args) >= 3:
            self.meter.tick()
            a, b, c = args[0], args[1], args[2]
            bc = Thunk(lambda: self.apply(b.force(), c))
            v = self.apply(self.apply(a.force(), c), bc)
            for x in args[3:]:
                v = self.apply(v, x)
            return v
        if isinstance(head, Oracle) and args:
            m = lam.decode_numeral(self.readback(args[0].force()))
            table = self.pca.table(head.name)
            if m is None or m not in table:
                raise Stuck
            self.meter.tick()
            v = self.eval_term(lam.numeral(table[m]))
            for x in args[1:]:
                v = self.apply(v, x)
            return v
        return Neutral(head, tuple(args))

    def readback(self, v) -> Term:
        """First-order readback; closures have no canonical term here."""
        if isinstance(v, Closure):
            # only reachable for oracle arguments; numerals are neutral
            # spines built from S and K so a closure is never a numeral
            raise Stuck
        t = v.head
        for a in v.args:
            t = App(t, self.readback(a.force()))
        return t


@contextmanager
def _deep_stack(limit: int = 12_000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


PROBES = (K, lam.FALSE, lam.I, S)

# status of a forced evaluation
_OK, _STUCK, _DIVERGE = "ok", "stuck", "diverge"


def _force(ev: Evaluator, th: Thunk, fuel: int):
    ev.meter = _Meter(fuel)
    try:
        with _deep_stack():
            return _OK, th.force()
    except Stuck:
        return _STUCK, None
    except (OutOfFuel, RecursionError):
        return _DIVERGE, None


class Agreement:
    """Compare a compiled term against the evaluator for one expression.

    Both sides are observed lazily: the term is brought to weak head normal
    form, the evaluator value is forced; heads and arities must match,
    arguments are compared recursively and closures are probed, all up to
    ``depth`` levels.  A side "fails" at a point when it gets stuck or runs
    out of fuel there; failing at the same point on both sides is agreement.
    """

    def __init__(self, pca: Pca = STANDARD, eval_fuel: int = 2000,
                 term_fuel: int = 10_000, depth: int = 3):
        self.pca = pca
        self.eval_fuel = eval_fuel
        self.term_fuel = term_fuel
        self.depth = depth

    def _term_status(self, t: Term, fuel: int):
        out = self.pca.whnf(t, fuel)
        if out.converged:
            return _OK, out.term
        return (_STUCK if out.stuck else _DIVERGE), None

    def check(self, e: LambdaExpr, args=(), compiled: Term | None = None) -> bool:
        """Does ``compiled`` (default: the compilation of ``e``) applied to
        ``args`` behave like ``e`` applied to ``args``?"""
        if compiled is None:
            compiled = lam.compile_lambda(e)
        subject = compiled(*args)
        ev = Evaluator(self.pca, self.eval_fuel)

        def run():
            v = ev.eval(e, {})
            for a in args:
                v = ev.apply(v, Thunk(ev._term_fn(a)))
            return v
        return self._agree(subject, Thunk(run), ev, self.depth)

    def _agree(self, t: Term, th: Thunk, ev: Evaluator, depth: int) -> bool:
        ts, tv = self._term_status(t, self.term_fuel)
        es, v = _force(ev, th, self.eval_fuel)
        if ts != es:
            # give whichever side did not converge more room before deciding
            if ts == _DIVERGE:
                ts, tv = self._term_status(t, self.term_fuel * 10)
            if es == _DIVERGE:
                es, v = _force(ev, th, self.eval_fuel * 10)
        if ts != es:
            return False
        if ts != _OK or depth == 0:
            return True
        if isinstance(v, Neutral):
            head, targs = spine(tv)
            if head != v.head or len(targs) != len(v.args):
                return False
            return all(self._agree(ta, a, ev, depth - 1) for ta, a in zip(targs, v.args))
        for probe in PROBES:
            pth = Thunk(ev._term_fn(probe))
            nxt = Thunk(lambda v=v, pth=pth: ev.apply(v, pth))
            if not self._agree(App(tv, probe), nxt, ev, depth - 1):
                return False
        return True


def agrees(e: LambdaExpr, args=(), pca: Pca = STANDARD, depth: int = 3) -> bool:
    return Agreement(pca, depth=depth).check(e, args)


def evaluate(e: LambdaExpr, args=(), pca: Pca = STANDARD, fuel: int = 2000):
    """Evaluate and read back a first-order result, or return ``None``
    (stuck, out of fuel, or a closure at the top)."""
    ev = Evaluator(pca, fuel)
    with _deep_stack():
        try:
            v = ev.eval(e, {})
            for a in args:
                v = ev.apply(v, Thunk(value=ev.eval_term(a)))
            return ev.readback(v)
        except (Stuck, OutOfFuel, RecursionError):
            return None
