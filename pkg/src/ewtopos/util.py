"""Canonical ordering and rendering of carrier elements.

Carrier elements are built from strings, integers, terms, tuples, frozensets
and :class:`FMap` values; :func:`ekey` orders any mix of them and
:func:`fmt` renders them for reports.
"""

from __future__ import annotations

from typing import Any, Iterable

from .terms import Term, term_key


class FMap(tuple):
    """A finite function as a sorted tuple of ``(arg, value)`` pairs.  Used
    for set-functions that appear inside carrier elements."""

    def __new__(cls, items: Iterable = ()):
        if isinstance(items, dict):
            items = items.items()
        return super().__new__(cls, sorted(items, key=lambda kv: ekey(kv[0])))

    def __call__(self, x):
        for k, v in self:
            if k == x:
                return v
        raise KeyError(x)

    def as_dict(self) -> dict:
        return dict(self)

    def __repr__(self):
        return fmt(self)


def ekey(obj: Any):
    if isinstance(obj, bool):
        return (0, int(obj))
    if isinstance(obj, int):
        return (0, obj)
    if isinstance(obj, str):
        return (1, obj)
    if isinstance(obj, Term):
        return (2, term_key(obj))
    if isinstance(obj, FMap):
        return (5, tuple((ekey(k), ekey(v)) for k, v in obj))
    if isinstance(obj, tuple):
        return (3, tuple(ekey(o) for o in obj))
    if isinstance(obj, frozenset):
        return (4, len(obj), tuple(sorted(ekey(o) for o in obj)))
    if obj is None:
        return (6,)
    raise TypeError(f"cannot order {obj!r}")


def sort_elements(xs: Iterable) -> list:
    return sorted(xs, key=ekey)


def fmt(obj: Any) -> str:
    from .syntax import pretty
    if isinstance(obj, str):
        return obj
    if isinstance(obj, bool):
        return str(obj).lower()
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Term):
        return pretty(obj)
    if isinstance(obj, FMap):
        return "[" + ", ".join(f"{fmt(k)} -> {fmt(v)}" for k, v in obj) + "]"
    if isinstance(obj, tuple):
        return "(" + ", ".join(fmt(o) for o in obj) + ")"
    if isinstance(obj, frozenset):
        return "{" + ", ".join(fmt(o) for o in sort_elements(obj)) + "}"
    if obj is None:
        return "-"
    return str(obj)


def fmt_set(ts) -> str:
    return fmt(frozenset(ts))
