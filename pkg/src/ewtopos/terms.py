"""Closed combinatory-logic terms over S, K and named oracle atoms.

Terms are immutable and hash-consed only in the weak sense that every node
caches its hash and size; equality is structural.
"""

from __future__ import annotations

from typing import Iterator


class Term:
    """Base class of closed terms.  Use :data:`S`, :data:`K`, :func:`oracle`
    and :func:`app` (or ``t(u)``) to build them."""

    __slots__ = ()

    size: int

    def __call__(self, *args: "Term") -> "Term":
        t = self
        for a in args:
            t = App(t, a)
        return t

    def __str__(self) -> str:
        return show(self)


class Atom(Term):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("atom", name))

    size = 1

    def __eq__(self, other):
        return isinstance(other, Atom) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (Atom, (self.name,))


class Oracle(Term):
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ValueError(f"bad oracle name {name!r}")
        self.name = name
        self._hash = hash(("oracle", name))

    size = 1

    def __eq__(self, other):
        return isinstance(other, Oracle) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"#{self.name}"

    def __reduce__(self):
        return (Oracle, (self.name,))


class App(Term):
    __slots__ = ("fun", "arg", "_hash", "size", "_oracles")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self._hash = hash((fun._hash, arg._hash))
        self.size = fun.size + arg.size + 1
        self._oracles = _has_oracle(fun) or _has_oracle(arg)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or other._hash != self._hash:
            return False
        # iterative comparison; terms can be deep
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if isinstance(a, App):
                if not isinstance(b, App) or a._hash != b._hash or a.size != b.size:
                    return False
                stack.append((a.arg, b.arg))
                stack.append((a.fun, b.fun))
            elif a != b:
                return False
        return True

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show(self)

    def __reduce__(self):
        return (App, (self.fun, self.arg))


def _has_oracle(t: Term) -> bool:
    if isinstance(t, Oracle):
        return True
    if isinstance(t, App):
        return t._oracles
    return False


S = Atom("S")
K = Atom("K")


def oracle(name: str) -> Oracle:
    return Oracle(name)


def app(*terms: Term) -> Term:
    """Left-associated application ``t0 t1 ... tn``."""
    if not terms:
        raise ValueError("app() needs at least one term")
    head, *rest = terms
    return head(*rest)


def has_oracle(t: Term) -> bool:
    return _has_oracle(t)


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, App):
            stack.append(u.arg)
            stack.append(u.fun)


def show(t: Term) -> str:
    """Raw surface syntax: atoms, ``#name`` oracles, left-associative
    juxtaposition.  ``parse_term(show(t)) == t``."""
    out: list[str] = []
    # (term, needs_parens) work stack; strings are emitted verbatim
    stack: list = [(t, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        u, paren = item
        if isinstance(u, Atom):
            out.append(u.name)
        elif isinstance(u, Oracle):
            out.append(f"#{u.name}")
        else:
            head, args = spine(u)
            parts: list = [(head, False)]
            for a in args:
                parts.append(" ")
                parts.append((a, isinstance(a, App)))
            if paren:
                parts = ["("] + parts + [")"]
            stack.extend(reversed(parts))
    return "".join(out)


def term_key(t: Term) -> tuple[int, str]:
    """Total order on terms: size first, then raw text."""
    return (t.size, show(t))


def set_key(ts) -> tuple:
    return tuple(sorted(term_key(t) for t in ts))


def sorted_terms(ts) -> list[Term]:
    return sorted(ts, key=term_key)


def sorted_sets(sets) -> list[frozenset]:
    return sorted(sets, key=set_key)
