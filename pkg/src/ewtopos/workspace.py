"""Reader for workspace files.

A workspace declares the PCA, named terms, assemblies, morphisms,
predicates of the three kinds, witnesses, implication universes and topos
data.  Declarations are read in order and may only refer to earlier ones,
which rules out cycles.  Ids are unique per section.  All errors carry a
line and column.  See the README for the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .assemblies import (DEFAULT_POOL_LEAVES, Morphism, PartitionedAssembly, Pool, product,
                         search_realizer)
from .instance import (BasePredicate, ImplicationUniverse, IRPredicate, IRWitness, classify,
                       eiR_meet, eiR_reindex, eiR_top, iR_bottom, iR_exists, iR_forall,
                       iR_implication, iR_join, iR_meet, iR_reindex, iR_top)
from .pca import DEFAULT_FUEL, Pca
from .syntax import ParseError, Token, TokenStream, parse_expr, tokenize
from .lam import compile_lambda
from .terms import Term
from .util import fmt
from .weihrauch import (EWPredicate, EWWitness, eW_exists, eW_join, eW_meet, eW_reindex,
                        restrict, to_eW, to_iR)


class ReferenceError_(ParseError):
    """An id that does not name an earlier declaration."""


@dataclass
class Witness:
    kind: str        # "ew", "ir" or "ei"
    data: Any        # EWWitness, IRWitness or Term


@dataclass
class Workspace:
    pca: Pca = field(default_factory=Pca)
    fuel: int = DEFAULT_FUEL
    pool_size: int = DEFAULT_POOL_LEAVES
    seed: int = 0
    terms: dict = field(default_factory=dict)
    assemblies: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    base_predicates: dict = field(default_factory=dict)
    ir_predicates: dict = field(default_factory=dict)
    ew_predicates: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    universes: dict = field(default_factory=dict)
    weak_subobjects: dict = field(default_factory=dict)
    topos_objects: dict = field(default_factory=dict)
    topos_arrows: dict = field(default_factory=dict)

    SECTIONS = ("terms", "assemblies", "morphisms", "base_predicates", "ir_predicates",
                "ew_predicates", "witnesses", "universes", "weak_subobjects",
                "topos_objects", "topos_arrows")

    def pool(self, extra=()) -> Pool:
        """Curated terms, then the workspace's named terms, then S/K terms."""
        return Pool(tuple(self.terms.values()) + tuple(extra), self.pool_size)

    def canonical(self) -> "Workspace":
        for s in self.SECTIONS:
            setattr(self, s, dict(sorted(getattr(self, s).items())))
        return self

    def predicate(self, text: str):
        """Evaluate a predicate expression such as ``G(F(p))``."""
        ts = TokenStream(tokenize(text))
        v = _Reader(self, ts).pexpr()
        if ts.peek().kind != "eof":
            ts.error(f"unexpected {ts.peek().text!r}")
        return v

    def lookup(self, ident: str):
        for s in ("ir_predicates", "ew_predicates", "base_predicates", "morphisms",
                  "assemblies", "universes"):
            d = getattr(self, s)
            if ident in d:
                return d[ident]
        return None


class _Reader:
    def __init__(self, ws: Workspace, ts: TokenStream):
        self.ws = ws
        self.ts = ts

    # -- small pieces --------------------------------------------------------

    def ref(self, section: str, what: str):
        t = self.ts.ident(what)
        d = getattr(self.ws, section)
        if t.text not in d:
            raise ReferenceError_(f"undefined {what} {t.text!r}", t.line, t.col)
        return d[t.text]

    def new_id(self, section: str, what: str) -> Token:
        t = self.ts.ident(f"{what} id")
        if t.text in getattr(self.ws, section):
            raise ParseError(f"duplicate {what} id {t.text!r}", t.line, t.col)
        return t

    def expr(self) -> Term:
        try:
            e = parse_expr(self.ts, self.ws.terms)
            return compile_lambda(e)
        except ParseError as err:
            if err.msg.startswith("unknown name"):
                raise ReferenceError_(err.msg.replace("unknown name", "undefined term"),
                                      err.line, err.col) from None
            raise

    def normal(self) -> Term:
        t = self.ts.peek()
        raw = self.expr()
        out = self.ws.pca.reduce(raw, self.ws.fuel)
        if not out.converged:
            raise ParseError(f"term does not reach a normal form ({out.kind})", t.line, t.col)
        return out.term

    def term_set(self) -> frozenset:
        self.ts.expect("[")
        out = []
        while not self.ts.at("]"):
            out.append(self.normal())
            if not self.ts.accept(","):
                break
        self.ts.expect("]")
        return frozenset(out)

    def element(self, X: PartitionedAssembly | None = None):
        t = self.ts.peek()
        e = self._raw_element()
        if X is not None and e not in X:
            raise ParseError(f"{fmt(e)} is not an element of the assembly", t.line, t.col)
        return e

    def _raw_element(self):
        t = self.ts.peek()
        if t.kind == "int":
            return self.ts.integer()
        if self.ts.accept("("):
            parts = [self._raw_element()]
            while self.ts.accept(","):
                parts.append(self._raw_element())
            self.ts.expect(")")
            return tuple(parts)
        return self.ts.ident("an element").text

    def base(self) -> PartitionedAssembly:
        parts = [self.ref("assemblies", "assembly")]
        while self.ts.accept("*"):
            parts.append(self.ref("assemblies", "assembly"))
        if len(parts) == 1:
            return parts[0]
        if len(parts) == 2:
            return product(*parts)[0]
        if len(parts) == 3:
            from .topos import triple
            return triple(*parts)
        self.ts.error("products of more than three assemblies are not supported")

    def block(self, entry):
        self.ts.expect("{")
        while not self.ts.at("}"):
            entry()
            if not self.ts.accept(";"):
                break
        self.ts.expect("}")

    # -- predicate expressions -------------------------------------------------

    def pexpr(self):
        t = self.ts.ident("a predicate expression")
        if not self.ts.at("("):
            v = self.ws.lookup(t.text)
            if v is None:
                raise ReferenceError_(f"undefined id {t.text!r}", t.line, t.col)
            return v
        self.ts.expect("(")
        args = [self.pexpr()]
        while self.ts.accept(","):
            args.append(self.pexpr())
        self.ts.expect(")")
        try:
            return _apply_op(self.ws, t.text, args)
        except (TypeError, ValueError, KeyError) as err:
            raise ParseError(f"{t.text}: {err}", t.line, t.col) from None

    # -- declarations ------------------------------------------------------------

    def workspace(self):
        while self.ts.peek().kind != "eof":
            kw = self.ts.ident("a declaration keyword")
            fn = getattr(self, "d_" + kw.text, None)
            if fn is None:
                raise ParseError(f"unknown declaration {kw.text!r}", kw.line, kw.col)
            fn()
            self.ts.accept(";")

    def d_pca(self):
        tables = {}
        fuel = self.ws.fuel

        def entry():
            nonlocal fuel
            k = self.ts.ident("'fuel' or 'oracle'")
            if k.text == "fuel":
                fuel = self.ts.integer()
            elif k.text == "oracle":
                name = self.ts.ident("an oracle name").text
                if name in tables:
                    raise ParseError(f"duplicate oracle {name!r}", k.line, k.col)
                table = {}

                def row():
                    a = self.ts.integer()
                    self.ts.expect("->")
                    table[a] = self.ts.integer()
                self.block(row)
                tables[name] = table
            else:
                raise ParseError(f"unknown pca setting {k.text!r}", k.line, k.col)
        self.block(entry)
        self.ws.fuel = fuel
        self.ws.pca = Pca.with_oracles(tables, fuel)

    def d_config(self):
        def entry():
            k = self.ts.ident("a setting")
            self.ts.accept(":")
            v = self.ts.integer()
            if k.text == "fuel":
                self.ws.fuel = v
                self.ws.pca = Pca(self.ws.pca.oracles, v)
            elif k.text == "pool_size":
                self.ws.pool_size = v
            elif k.text == "seed":
                self.ws.seed = v
            else:
                raise ParseError(f"unknown setting {k.text!r}", k.line, k.col)
        self.block(entry)

    def d_term(self):
        t = self.new_id("terms", "term")
        self.ts.expect("=")
        self.ws.terms[t.text] = self.normal()

    def d_assembly(self):
        t = self.new_id("assemblies", "assembly")
        items = []

        def entry():
            e_tok = self.ts.peek()
            e = self.element()
            if any(e == x for x, _ in items):
                raise ParseError(f"duplicate element {fmt(e)}", e_tok.line, e_tok.col)
            self.ts.expect(":")
            items.append((e, self.normal()))
        self.block(entry)
        self.ws.assemblies[t.text] = PartitionedAssembly(items)

    def d_morphism(self):
        t = self.new_id("morphisms", "morphism")
        self.ts.expect(":")
        src = self.base()
        self.ts.expect("->")
        tgt = self.base()
        mapping = {}

        def entry():
            a = self.element(src)
            self.ts.expect("->")
            mapping[a] = self.element(tgt)
        self.block(entry)
        missing = [x for x in src if x not in mapping]
        if missing:
            raise ParseError(f"morphism {t.text!r} has no image for {fmt(missing[0])}", t.line, t.col)
        if self.ts.accept("realizer"):
            r_tok = self.ts.peek()
            m = Morphism(src, tgt, mapping, self.expr())
            # an unknown verdict (fuel) is let through; a refuted realizer is not
            v = m.verify(self.ws.pca)
            if v.fails:
                raise ParseError(f"realizer of {t.text!r} is wrong: {v.reason}", r_tok.line, r_tok.col)
        else:
            real = search_realizer(src, tgt, mapping, self.ws.pool(), self.ws.pca)
            if real is None:
                raise ParseError(f"no realizer for {t.text!r} in the pool; give one with 'realizer'",
                                 t.line, t.col)
            m = Morphism(src, tgt, mapping, real)
        self.ws.morphisms[t.text] = m

    def d_base_predicate(self):
        t = self.new_id("base_predicates", "base predicate")
        if self.ts.accept("="):
            v = self.pexpr()
            if not isinstance(v, BasePredicate):
                raise ParseError("expression is not a base predicate", t.line, t.col)
            self.ws.base_predicates[t.text] = v
            return
        self.ts.expect("on")
        X = self.base()
        vals = {x: frozenset() for x in X}

        def entry():
            x = self.element(X)
            self.ts.expect(":")
            vals[x] = self.term_set()
        self.block(entry)
        self.ws.base_predicates[t.text] = BasePredicate(X, vals)

    def d_ir_predicate(self):
        t = self.new_id("ir_predicates", "instance predicate")
        if self.ts.accept("="):
            v = self.pexpr()
            if not isinstance(v, IRPredicate):
                raise ParseError("expression is not an instance predicate", t.line, t.col)
            self.ws.ir_predicates[t.text] = v
            return
        X = self.base() if self.ts.accept("on") else None
        via = self.ts.expect("via")
        f = self.ref("morphisms", "morphism")
        if X is not None and f.target != X:
            raise ParseError("the display does not land in the stated base", via.line, via.col)
        vals = {y: frozenset() for y in f.source}

        def entry():
            y = self.element(f.source)
            self.ts.expect(":")
            vals[y] = self.term_set()
        self.block(entry)
        self.ws.ir_predicates[t.text] = IRPredicate(f, vals)

    def d_ew_predicate(self):
        t = self.new_id("ew_predicates", "extended predicate")
        if self.ts.accept("="):
            v = self.pexpr()
            if not isinstance(v, EWPredicate):
                raise ParseError("expression is not an extended predicate", t.line, t.col)
            self.ws.ew_predicates[t.text] = v
            return
        self.ts.expect("on")
        X = self.base()
        sup = {}

        def entry():
            self.ts.expect("(")
            x = self.element(X)
            self.ts.expect(",")
            a = self.normal()
            self.ts.expect(")")
            self.ts.expect("->")
            self.ts.expect("[")
            outer = []
            while not self.ts.at("]"):
                outer.append(self.term_set())
                if not self.ts.accept(","):
                    break
            self.ts.expect("]")
            sup.setdefault((x, a), set()).update(outer)
        self.block(entry)
        self.ws.ew_predicates[t.text] = EWPredicate(X, sup)

    def d_witness(self):
        t = self.new_id("witnesses", "witness")
        self.ts.expect("=")
        k = self.ts.ident("'ew', 'ir' or 'ei'")
        self.ts.expect("(")
        if k.text == "ew":
            a = self.expr()
            self.ts.expect(",")
            b = self.expr()
            w = Witness("ew", EWWitness(a, b))
        elif k.text == "ir":
            h = self.ref("morphisms", "morphism")
            self.ts.expect(",")
            w = Witness("ir", IRWitness(h, self.expr()))
        elif k.text == "ei":
            w = Witness("ei", self.expr())
        else:
            raise ParseError(f"unknown witness kind {k.text!r}", k.line, k.col)
        self.ts.expect(")")
        self.ws.witnesses[t.text] = w

    def d_universe(self):
        t = self.new_id("universes", "universe")
        values, pool = [frozenset()], []

        def entry():
            k = self.ts.ident("'values' or 'pool'")
            if k.text == "values":
                values.clear()
                self.ts.expect("[")
                while not self.ts.at("]"):
                    values.append(self.term_set())
                    if not self.ts.accept(","):
                        break
                self.ts.expect("]")
            elif k.text == "pool":
                pool.extend(sorted(self.term_set(), key=lambda s: (s.size, str(s))))
            else:
                raise ParseError(f"unknown universe field {k.text!r}", k.line, k.col)
        self.block(entry)
        self.ws.universes[t.text] = ImplicationUniverse(tuple(values), tuple(pool) or
                                                        ImplicationUniverse.pool)

    def d_weak_subobject(self):
        t = self.new_id("weak_subobjects", "weak subobject")
        self.ts.expect("on")
        X = self.ref("assemblies", "assembly")
        self.ts.expect("via")
        d = self.ref("morphisms", "morphism")
        from .topos import WeakSubobjectObject
        try:
            self.ws.weak_subobjects[t.text] = WeakSubobjectObject(X, d)
        except ValueError as err:
            raise ParseError(str(err), t.line, t.col) from None

    def _certificates(self, allowed):
        certs = {}
        if not self.ts.at("{"):
            return certs

        def entry():
            k = self.ts.ident("a condition name")
            name = k.text.replace("_", "-")
            if name not in allowed:
                raise ParseError(f"unknown condition {k.text!r}", k.line, k.col)
            self.ts.expect(":")
            w = self.ref("witnesses", "witness")
            if w.kind != "ew":
                raise ParseError("topos certificates must be ew witnesses", k.line, k.col)
            certs[name] = w.data
        self.block(entry)
        return certs

    def d_topos_object(self):
        from .topos import ToposObject
        t = self.new_id("topos_objects", "topos object")
        self.ts.expect("on")
        X = self.ref("assemblies", "assembly")
        self.ts.expect("rho")
        rho = self.ref("ew_predicates", "extended predicate")
        certs = self._certificates(("symmetry", "transitivity"))
        try:
            self.ws.topos_objects[t.text] = ToposObject(X, rho, certs)
        except ValueError as err:
            raise ParseError(str(err), t.line, t.col) from None

    def d_topos_arrow(self):
        from .topos import ARROW_CONDITIONS, ToposArrow
        t = self.new_id("topos_arrows", "topos arrow")
        self.ts.expect(":")
        a = self.ref("topos_objects", "topos object")
        self.ts.expect("->")
        b = self.ref("topos_objects", "topos object")
        self.ts.expect("phi")
        phi = self.ref("ew_predicates", "extended predicate")
        certs = self._certificates(ARROW_CONDITIONS)
        try:
            self.ws.topos_arrows[t.text] = ToposArrow(a, b, phi, certs)
        except ValueError as err:
            raise ParseError(str(err), t.line, t.col) from None


def _kind(v) -> str:
    return type(v).__name__


def _apply_op(ws: Workspace, op: str, args: list):
    def need(n):
        if len(args) != n:
            raise ValueError(f"expects {n} argument(s), got {len(args)}")

    if op == "F":
        need(1)
        if not isinstance(args[0], IRPredicate):
            raise TypeError("F takes an instance predicate")
        return to_eW(args[0])
    if op == "G":
        need(1)
        if not isinstance(args[0], EWPredicate):
            raise TypeError("G takes an extended predicate")
        return to_iR(args[0])
    if op == "top":
        need(1)
        return iR_top(args[0])
    if op == "bottom":
        need(1)
        return iR_bottom(args[0])
    if op == "base_top":
        need(1)
        return eiR_top(args[0])
    if op == "restrict":
        need(1)
        return restrict(args[0])
    if op == "classify":
        need(1)
        return classify(args[0]).canonical
    if op in ("meet", "join"):
        need(2)
        p, q = args
        if type(p) is not type(q):
            raise TypeError(f"cannot combine {_kind(p)} with {_kind(q)}")
        if isinstance(p, IRPredicate):
            return iR_meet(p, q) if op == "meet" else iR_join(p, q).predicate
        if isinstance(p, EWPredicate):
            return eW_meet(p, q) if op == "meet" else eW_join(p, q)
        if isinstance(p, BasePredicate) and op == "meet":
            return eiR_meet(p, q)
        raise TypeError(f"{op} is not defined on {_kind(p)}")
    if op == "reindex":
        need(2)
        h, p = args
        if isinstance(p, IRPredicate):
            return iR_reindex(h, p)
        if isinstance(p, EWPredicate):
            return eW_reindex(h, p)
        if isinstance(p, BasePredicate):
            return eiR_reindex(h, p)
        raise TypeError("reindex takes a morphism and a predicate")
    if op == "exists":
        need(2)
        f, p = args
        if isinstance(p, IRPredicate):
            return iR_exists(f, p)
        if isinstance(p, EWPredicate):
            return eW_exists(f, p)
        raise TypeError("exists takes a morphism and an instance or extended predicate")
    if op == "implies":
        if len(args) not in (2, 3):
            raise ValueError("expects 2 or 3 arguments")
        u = args[2] if len(args) == 3 else None
        return iR_implication(args[0], args[1], u, ws.pca).predicate
    if op == "forall":
        if len(args) not in (2, 3):
            raise ValueError("expects 2 or 3 arguments")
        pool = args[2].pool if len(args) == 3 else None
        return iR_forall(args[0], args[1], pool, ws.pca).predicate
    raise KeyError(f"unknown operation {op!r}")


def parse_workspace_text(text: str) -> Workspace:
    ws = Workspace()
    _Reader(ws, TokenStream(tokenize(text))).workspace()
    return ws.canonical()


def parse_workspace(path) -> Workspace:
    return parse_workspace_text(Path(path).read_text(encoding="utf-8"))
