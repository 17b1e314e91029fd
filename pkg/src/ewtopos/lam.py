"""A small λ-syntax and its compilation to S/K terms by bracket abstraction.

Open terms (the intermediate form of compilation) are closed :class:`Term`
constants, :class:`Var` nodes and :class:`OApp` nodes.  Any closed subterm is
treated as a constant of the algebra, so abstracting a variable out of it
yields ``K a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import K, S, App, Term


class UnboundVariable(ValueError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"unbound variable(s): {', '.join(self.names)}")


# -- λ-expressions ---------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    term: Term


@dataclass(frozen=True)
class Lam:
    var: str
    body: "LambdaExpr"


@dataclass(frozen=True)
class LApp:
    fn: "LambdaExpr"
    arg: "LambdaExpr"


@dataclass(frozen=True)
class LPair:
    left: "LambdaExpr"
    right: "LambdaExpr"


LambdaExpr = Union[Var, Const, Lam, LApp, LPair]


def lams(names, body: LambdaExpr) -> LambdaExpr:
    for n in reversed(list(names)):
        body = Lam(n, body)
    return body


def lapp(*exprs: LambdaExpr) -> LambdaExpr:
    e = exprs[0]
    for a in exprs[1:]:
        e = LApp(e, a)
    return e


def free_vars(e: LambdaExpr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.var}
    if isinstance(e, LApp):
        return free_vars(e.fn) | free_vars(e.arg)
    if isinstance(e, LPair):
        return free_vars(e.left) | free_vars(e.right)
    raise TypeError(e)


# -- open combinatory terms ------------------------------------------------

@dataclass(frozen=True)
class OApp:
    fun: "Open"
    arg: "Open"


Open = Union[Term, Var, OApp]


def oapp(a: Open, b: Open) -> Open:
    if isinstance(a, Term) and isinstance(b, Term):
        return App(a, b)
    return OApp(a, b)


def open_vars(t: Open) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, OApp):
        return open_vars(t.fun) | open_vars(t.arg)
    return set()


I = S(K, K)


def bracket_abstract(x: str, body: Open) -> Open:
    """``λx.body`` by the four clauses: ``λx.x = S K K``, ``λx.y = K y``,
    ``λx.a = K a`` for a constant ``a``, and
    ``λx.(t t') = S (λx.t) (λx.t')``."""
    if isinstance(body, Var):
        if body.name == x:
            return I
        return OApp(K, body)
    if isinstance(body, Term):
        return App(K, body)
    return oapp(oapp(S, bracket_abstract(x, body.fun)),
                bracket_abstract(x, body.arg))


def _to_open(e: LambdaExpr) -> Open:
    if isinstance(e, Var):
        return e
    if isinstance(e, Const):
        return e.term
    if isinstance(e, Lam):
        return bracket_abstract(e.var, _to_open(e.body))
    if isinstance(e, LApp):
        return oapp(_to_open(e.fn), _to_open(e.arg))
    if isinstance(e, LPair):
        return oapp(oapp(PAIR, _to_open(e.left)), _to_open(e.right))
    raise TypeError(f"not a lambda expression: {e!r}")


def compile_lambda(e: LambdaExpr) -> Term:
    """Compile a closed λ-expression to a term (inside-out abstraction)."""
    out = _to_open(e)
    if not isinstance(out, Term):
        raise UnboundVariable(open_vars(out))
    return out


# -- the combinator library ------------------------------------------------
# PAIR must exist before any pair sugar is compiled; it uses none itself.

PAIR = compile_lambda(lams("abz", lapp(Var("z"), Var("a"), Var("b"))))
TRUE = K
FALSE = compile_lambda(lams("xy", Var("y")))
CASE = compile_lambda(lams("bxy", lapp(Var("b"), Var("x"), Var("y"))))
P1 = compile_lambda(Lam("p", LApp(Var("p"), Const(TRUE))))
P2 = compile_lambda(Lam("p", LApp(Var("p"), Const(FALSE))))

COMBINATORS = {
    "I": I,
    "PAIR": PAIR,
    "P1": P1,
    "P2": P2,
    "TRUE": TRUE,
    "FALSE": FALSE,
    "CASE": CASE,
}


def combinator(name: str) -> Term:
    try:
        return COMBINATORS[name.upper()]
    except KeyError:
        raise KeyError(f"unknown combinator {name!r}") from None


def pair(a: Term, b: Term) -> Term:
    """The normal form of ``PAIR a b`` for normal ``a``, ``b``:
    ``S (S I (K a)) (K b)``."""
    return S(S(I, K(a)), K(b))


def unpair(t: Term):
    """Inverse of :func:`pair` on its image; ``None`` otherwise."""
    if not isinstance(t, App):
        return None
    f, kb = t.fun, t.arg
    if not (isinstance(f, App) and f.fun == S and isinstance(kb, App) and kb.fun == K):
        return None
    inner = f.arg
    if not (isinstance(inner, App) and isinstance(inner.fun, App)
            and inner.fun.fun == S and inner.fun.arg == I):
        return None
    ka = inner.arg
    if not (isinstance(ka, App) and ka.fun == K):
        return None
    return ka.arg, kb.arg


def numeral(n: int) -> Term:
    """Scott-style numerals: ``0 = <true, I>``, ``n+1 = <false, n>``."""
    if n < 0:
        raise ValueError("numerals are natural numbers")
    t = pair(TRUE, I)
    for _ in range(n):
        t = pair(FALSE, t)
    return t


def decode_numeral(t: Term):
    n = 0
    while True:
        parts = unpair(t)
        if parts is None:
            return None
        tag, rest = parts
        if tag == TRUE:
            return n if rest == I else None
        if tag != FALSE:
            return None
        n += 1
        t = rest
