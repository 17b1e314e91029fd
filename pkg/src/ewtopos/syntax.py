"""Surface syntax for terms: a tokenizer shared with the workspace reader,
a λ-expression parser, and two printers.

``show`` (re-exported from :mod:`terms`) is the raw printer and round-trips
exactly through :func:`parse_term`.  :func:`pretty` folds recognisable
shapes (pairs, numerals, library combinators) back into sugar; it is meant
for reports, not for re-reading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from . import lam
from .lam import Const, LApp, LambdaExpr, LPair, Var, compile_lambda
from .terms import App, K, Oracle, S, Term, show, spine


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg = msg
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{msg}")


@dataclass(frozen=True)
class Token:
    kind: str   # ident, oracle, int, punct, eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<arrow>->)
  | (?P<oracle>\#[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[\\λ.()<>,{}\[\];:=|*])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "oracle", "int", "punct"):
            out.append(Token(kind, m.group(), line, col))
        elif kind == "arrow":
            out.append(Token("punct", "->", line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


BUILTINS: dict[str, Term] = {
    "S": S,
    "K": K,
    "I": lam.I,
    "p1": lam.P1,
    "p2": lam.P2,
    "true": lam.TRUE,
    "false": lam.FALSE,
    "case": lam.CASE,
    "pair": lam.PAIR,
}


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("punct", "ident") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}", t.line, t.col)
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "int":
            raise ParseError(f"expected a number, found {t.text or 'end of input'!r}", t.line, t.col)
        self.i += 1
        return int(t.text)

    def error(self, msg: str):
        t = self.peek()
        raise ParseError(msg, t.line, t.col)


# tokens that can start an atomic expression
def _starts_atom(t: Token) -> bool:
    if t.kind in ("ident", "oracle"):
        return True
    return t.kind == "punct" and t.text in ("(", "<", "\\", "λ")


def parse_expr(ts: TokenStream, env: Mapping[str, Term] | None = None,
               bound: tuple = ()) -> LambdaExpr:
    """expr := '\\' ident+ '.' expr | atom+"""
    env = env or {}
    if ts.at("\\") or ts.at("λ"):
        ts.next()
        names = [ts.ident("a bound variable").text]
        while ts.peek().kind == "ident":
            names.append(ts.next().text)
        ts.expect(".")
        body = parse_expr(ts, env, bound + tuple(names))
        return lam.lams(names, body)
    e = _parse_atom(ts, env, bound)
    while _starts_atom(ts.peek()):
        if ts.at("\\") or ts.at("λ"):
            # a trailing abstraction extends to the right
            e = LApp(e, parse_expr(ts, env, bound))
            break
        e = LApp(e, _parse_atom(ts, env, bound))
    return e


def _parse_atom(ts: TokenStream, env, bound) -> LambdaExpr:
    t = ts.peek()
    if t.kind == "oracle":
        ts.next()
        return Const(Oracle(t.text[1:]))
    if t.kind == "ident":
        ts.next()
        if t.text == "num" and ts.at(":"):
            ts.next()
            return Const(lam.numeral(ts.integer()))
        if t.text in bound:
            return Var(t.text)
        if t.text in env:
            return Const(env[t.text])
        if t.text in BUILTINS:
            return Const(BUILTINS[t.text])
        raise ParseError(f"unknown name {t.text!r}", t.line, t.col)
    if ts.accept("("):
        e = parse_expr(ts, env, bound)
        ts.expect(")")
        return e
    if ts.accept("<"):
        a = parse_expr(ts, env, bound)
        ts.expect(",")
        b = parse_expr(ts, env, bound)
        ts.expect(">")
        return LPair(a, b)
    ts.error(f"expected a term, found {t.text or 'end of input'!r}")


def parse_lambda(text: str, env: Mapping[str, Term] | None = None) -> LambdaExpr:
    ts = TokenStream(tokenize(text))
    e = parse_expr(ts, env)
    if ts.peek().kind != "eof":
        ts.error(f"unexpected {ts.peek().text!r}")
    return e


def parse_term(text: str, env: Mapping[str, Term] | None = None) -> Term:
    """Parse and compile.  Free identifiers resolve through ``env`` and then
    the builtins; λ-sugar is compiled by bracket abstraction."""
    return compile_lambda(parse_lambda(text, env))


def term(text: str, **env: Term) -> Term:
    """Shorthand used throughout the library: ``term("\\x. l <p2 x, x>", l=ell)``."""
    return parse_term(text, env)


_NAMED = [
    (lam.I, "I"),
    (lam.P1, "p1"),
    (lam.P2, "p2"),
    (lam.FALSE, "false"),
    (lam.PAIR, "pair"),
    (lam.CASE, "case"),
]


def pretty(t: Term) -> str:
    """Readable rendering with sugar for pairs, numerals and library terms."""
    for c, name in _NAMED:
        if t == c:
            return name
    n = lam.decode_numeral(t)
    if n is not None:
        return f"num:{n}"
    parts = lam.unpair(t)
    if parts is not None:
        return f"<{pretty(parts[0])}, {pretty(parts[1])}>"
    if not isinstance(t, App):
        return show(t)
    head, args = spine(t)
    out = [pretty(head)]
    for a in args:
        s = pretty(a)
        if isinstance(a, App) and not s.startswith("<") and " " in s:
            s = f"({s})"
        out.append(s)
    return " ".join(out)


__all__ = ["ParseError", "Token", "TokenStream", "parse_expr", "parse_lambda",
           "parse_term", "pretty", "show", "term", "tokenize"]
