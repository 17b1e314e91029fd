"""Command-line front end.

    ewtopos [--workspace FILE] [--fuel N] [--pool-size N] [--seed N]
            [--format text|machine] COMMAND ...

Exit status: 0 holds or success, 1 fails, 2 unknown (fuel or pool ran out),
3 input error.  Reports go to stdout and are byte-identical for identical
inputs; the wall-clock time goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import laws
from .assemblies import Morphism, PartitionedAssembly
from .instance import (BasePredicate, IRPredicate, IRWitness, UniverseTooSmall, classify,
                       iR_leq, leq_eiR, reflexivity, search_eiR, search_iR)
from .pca import Pca
from .syntax import ParseError, parse_term, pretty
from .topos import (ToposArrow, ToposObject, compose, embed_R, lr_identity, validate_arrow,
                    validate_object)
from .util import fmt, fmt_set, sort_elements
from .verdict import Verdict, fails, holds, unknown, worst
from .weihrauch import (FG_COUNIT, FG_UNIT, FG_UNIT_LITERAL, REFLEXIVITY, EWPredicate,
                        EWWitness, gf_counit, gf_unit, leq_extW, search_extW)
from .workspace import Witness, Workspace, _apply_op, parse_workspace

INPUT_ERROR = 3
ORDERS = ("eiR", "iR", "extW")
BUILTIN_WITNESSES = ("refl", "fg_counit", "fg_unit", "fg_unit_literal", "gf_unit", "gf_counit")


class InputError(Exception):
    """Bad command line or workspace; exit status 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- reports -----------------------------------------------------------------

class Report:
    """Ordered fields; a value is a string or a list of lines."""

    def __init__(self, command: list[str]):
        self.fields: list = [("command", " ".join(command))]
        self.exit = 0

    def add(self, key: str, value):
        self.fields.append((key, value))

    def verdict(self, v: Verdict, key: str = "verdict"):
        """Record a verdict; the exit status is the worst one seen."""
        self.add(key, str(v))
        if v.fails or self.exit == 1:
            self.exit = 1
        else:
            self.exit = max(self.exit, v.exit_code)

    def text(self) -> str:
        out = []
        for k, v in self.fields:
            if isinstance(v, list):
                out.append(f"{k}:")
                out.extend(f"  {line}" for line in v)
            else:
                out.append(f"{k}: {v}")
        return "\n".join(out) + "\n"

    def machine(self) -> str:
        obj = {"fields": [[k, v] for k, v in self.fields], "exit": self.exit}
        return json.dumps(obj, ensure_ascii=False) + "\n"


def describe(obj) -> list[str]:
    """Lines describing a workspace value."""
    if isinstance(obj, BasePredicate):
        return [f"{fmt(x)}: {fmt_set(v)}" for x, v in obj.items()]
    if isinstance(obj, IRPredicate):
        return [f"{fmt(y)} [{pretty(obj.source.name(y))}] -> {fmt(obj.display(y))}: "
                f"{fmt_set(obj.alpha(y))}" for y in obj.source] + \
               [f"display realizer: {fmt(obj.display.realizer)}"]
    if isinstance(obj, EWPredicate):
        return [f"({fmt(x)}, {fmt(a)}) -> [{', '.join(fmt_set(A) for A in sort_elements(o))}]"
                for (x, a), o in obj.items()] or ["(empty support)"]
    if isinstance(obj, Morphism):
        return [f"{fmt(x)} -> {fmt(y)}" for x, y in obj.items()] + \
               [f"realizer: {fmt(obj.realizer)}"]
    if isinstance(obj, PartitionedAssembly):
        return [f"{fmt(x)}: {fmt(t)}" for x, t in obj.items()]
    return [str(obj)]


def describe_witness(w) -> str:
    if isinstance(w, EWWitness):
        return f"ew({fmt(w.ell1)}, {fmt(w.ell2)})"
    if isinstance(w, IRWitness):
        rows = ", ".join(f"{fmt(a)} -> {fmt(b)}" for a, b in w.mediator.items())
        return f"ir([{rows}] by {fmt(w.mediator.realizer)}, {fmt(w.ell)})"
    return f"ei({fmt(w)})"


# -- resolving arguments -------------------------------------------------------

def _value(ws: Workspace, text: str):
    """An id or a predicate expression such as ``G(F(p))``."""
    try:
        return ws.predicate(text)
    except ParseError as err:
        raise InputError(f"in {text!r}: {err}") from None


def _expect(v, kind, text: str, what: str):
    if not isinstance(v, kind):
        raise InputError(f"{text!r} is not {what}")
    return v


_ORDER_KIND = {"eiR": (BasePredicate, "a base predicate"),
               "iR": (IRPredicate, "an instance predicate"),
               "extW": (EWPredicate, "an extended predicate")}


def _pair(ws, order, ids):
    if len(ids) != 2:
        raise InputError(f"expected two predicates, got {len(ids)}")
    kind, what = _ORDER_KIND[order]
    a, b = (_expect(_value(ws, t), kind, t, what) for t in ids)
    if a.base != b.base:
        raise InputError("the predicates live over different assemblies")
    return a, b


def _witness(ws: Workspace, order: str, name: str, p, q):
    if name in ws.witnesses:
        w: Witness = ws.witnesses[name]
        want = {"eiR": "ei", "iR": "ir", "extW": "ew"}[order]
        if w.kind != want:
            raise InputError(f"witness {name!r} is an {w.kind} witness, not {want}")
        return w.data
    if name == "refl":
        if order == "eiR":
            return parse_term("p2")
        return reflexivity(p) if order == "iR" else REFLEXIVITY
    if order == "extW" and name in ("fg_counit", "fg_unit", "fg_unit_literal"):
        return {"fg_counit": FG_COUNIT, "fg_unit": FG_UNIT,
                "fg_unit_literal": FG_UNIT_LITERAL}[name]
    if order == "iR" and name == "gf_unit":
        return gf_unit(p)
    if order == "iR" and name == "gf_counit":
        return gf_counit(q)
    raise InputError(f"undefined witness {name!r}")


def _check(ws, order, p, q, w, literal=False) -> Verdict:
    if order == "eiR":
        return leq_eiR(p, q, w, ws.pca, ws.fuel)
    if order == "iR":
        if w.mediator.source != p.source or w.mediator.target != q.source:
            return fails("the mediating map does not go between the display sources")
        return iR_leq(p, q, w, ws.pca, ws.fuel)
    return leq_extW(p, q, w, ws.pca, ws.fuel, literal=literal)


def _search(ws, order, p, q):
    pool = ws.pool()
    if order == "eiR":
        return search_eiR(p, q, pool=pool, pca=ws.pca)
    if order == "iR":
        return search_iR(p, q, pool=pool, pca=ws.pca)
    return search_extW(p, q, pool=pool, pca=ws.pca)


# -- commands -------------------------------------------------------------------

def cmd_check(ws, args, rep: Report):
    p, q = _pair(ws, args.order, args.ids)
    if args.witness is None:
        w = _search(ws, args.order, p, q)
        if w is None:
            rep.verdict(unknown("no witness given and none found in the pool"))
            return
        rep.add("witness", f"{describe_witness(w)} (found by search)")
    else:
        w = _witness(ws, args.order, args.witness, p, q)
        rep.add("witness", describe_witness(w))
    rep.verdict(_check(ws, args.order, p, q, w, args.literal))


def cmd_search(ws, args, rep: Report):
    p, q = _pair(ws, args.order, args.ids)
    w = _search(ws, args.order, p, q)
    if w is None:
        rep.verdict(unknown("pool exhausted without a witness"))
        return
    rep.add("witness", describe_witness(w))
    rep.verdict(_check(ws, args.order, p, q, w))


def cmd_op(ws, args, rep: Report):
    vals = [_value(ws, t) for t in args.ids]
    try:
        if args.name == "classify":
            if len(vals) != 1 or not isinstance(vals[0], IRPredicate):
                raise InputError("classify takes one instance predicate")
            c = classify(vals[0])
            rep.add("result", describe(c.canonical))
            rep.add("to canonical", describe_witness(c.to_canonical))
            rep.add("from canonical", describe_witness(c.from_canonical))
            rep.verdict(_both(iR_leq(vals[0], c.canonical, c.to_canonical, ws.pca, ws.fuel),
                              iR_leq(c.canonical, vals[0], c.from_canonical, ws.pca, ws.fuel)))
            return
        out = _apply_op(ws, args.name, vals)
    except UniverseTooSmall as err:
        rep.verdict(unknown(f"universe too small: {err}"))
        return
    except (TypeError, ValueError, KeyError) as err:
        raise InputError(f"{args.name}: {err}") from None
    rep.add("result", describe(out))
    rep.verdict(holds())


def _both(a: Verdict, b: Verdict) -> Verdict:
    return a if not a.holds else b


def cmd_translate(ws, args, rep: Report):
    v = _value(ws, args.id)
    kind = IRPredicate if args.functor == "F" else EWPredicate
    _expect(v, kind, args.id, "an instance predicate" if kind is IRPredicate
            else "an extended predicate")
    out = _apply_op(ws, args.functor, [v])
    rep.add("result", describe(out))
    rep.verdict(holds())


def cmd_laws(ws, args, rep: Report):
    if args.suite not in laws.SUITES and args.suite != "all":
        raise InputError(f"unknown suite {args.suite!r}; one of {', '.join(laws.SUITES)}, all")
    names = list(laws.SUITES) if args.suite == "all" else [args.suite]
    lines, verdicts = [], []
    for name in names:
        r = laws.SUITES[name](ws.seed)
        lines.extend(r.text(args.verbose).splitlines())
        verdicts.append(r.verdict)
    rep.add("report", lines)
    rep.verdict(worst(verdicts))


def _topos_item(ws, ident):
    if ident in ws.topos_objects:
        return ws.topos_objects[ident]
    if ident in ws.topos_arrows:
        return ws.topos_arrows[ident]
    raise InputError(f"undefined topos object or arrow {ident!r}")


def _certificates(rep, results):
    rep.add("conditions", [f"{r.name}: {r.verdict}" +
                           (f" by {describe_witness(r.witness)}" if r.witness is not None else "")
                           for r in results])


def cmd_topos(ws, args, rep: Report):
    pool = ws.pool()
    if args.action == "validate":
        if not args.ids:
            raise InputError("validate needs at least one id")
        for ident in args.ids:
            item = _topos_item(ws, ident)
            fn = validate_object if isinstance(item, ToposObject) else validate_arrow
            v, results = fn(item, pool, ws.pca)
            rep.add("item", ident)
            _certificates(rep, results)
            rep.verdict(v)
        return
    if args.action == "compose":
        if len(args.ids) != 2:
            raise InputError("compose takes two arrows")
        a, b = (_topos_item(ws, i) for i in args.ids)
        if not (isinstance(a, ToposArrow) and isinstance(b, ToposArrow)):
            raise InputError("compose takes two arrows")
        try:
            out, v = compose(a, b, pool, ws.pca)
        except ValueError as err:
            raise InputError(str(err)) from None
        rep.add("relation", describe(out.phi))
        rep.add("certificates", [f"{n}: {describe_witness(w)}"
                                 for n, w in out.certificates.items() if w is not None])
        rep.verdict(v)
        return
    if len(args.ids) != 1 or args.ids[0] not in ws.weak_subobjects:
        raise InputError("embed takes one weak subobject id")
    w = ws.weak_subobjects[args.ids[0]]
    o = embed_R(w)
    rep.add("relation", describe(o.rho))
    v, results = validate_object(o, pool, ws.pca)
    _certificates(rep, results)
    rep.verdict(v)
    rep.verdict(lr_identity(w, ws.pca), key="l after r")


def cmd_reduce(ws, args, rep: Report):
    try:
        t = parse_term(args.term, ws.terms)
    except ParseError as err:
        raise InputError(f"in term: {err}") from None
    out = ws.pca.reduce(t, ws.fuel)
    rep.add("outcome", out.kind)
    rep.add("term", fmt(out.term))
    rep.add("steps", str(out.steps))
    rep.exit = {"converged": 0, "stuck": 1}.get(out.kind, 2)


# -- entry point ------------------------------------------------------------------

GLOBAL_DEFAULTS = {"workspace": None, "fuel": None, "pool_size": None, "seed": None,
                   "format": "text"}


def build_parser() -> argparse.ArgumentParser:
    # the global flags are accepted before or after the subcommand; SUPPRESS
    # keeps a subparser from overwriting a value given before it
    common = _Parser(add_help=False)
    common.add_argument("--workspace", default=argparse.SUPPRESS, help="workspace file")
    common.add_argument("--fuel", type=int, default=argparse.SUPPRESS,
                        help="reduction fuel (overrides the workspace)")
    common.add_argument("--pool-size", type=int, default=argparse.SUPPRESS,
                        help="largest S/K term in the search pool, in leaves")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for the law suites")
    common.add_argument("--format", choices=("text", "machine"), default=argparse.SUPPRESS)
    ap = _Parser(prog="ewtopos", parents=[common],
                 description="Check, search and construct realizability witnesses.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    c = add("check", "verify an inequality")
    c.add_argument("order", choices=ORDERS)
    c.add_argument("ids", nargs="+")
    c.add_argument("--witness")
    c.add_argument("--literal", action="store_true",
                   help="extW only: hand l2 the bare tag instead of the named instance")
    c.set_defaults(fn=cmd_check)

    s = add("search", "search for a witness")
    s.add_argument("order", choices=ORDERS)
    s.add_argument("ids", nargs="+")
    s.set_defaults(fn=cmd_search)

    o = add("op", "construct a predicate")
    o.add_argument("name", choices=("meet", "join", "implies", "exists", "forall", "reindex",
                                    "classify"))
    o.add_argument("ids", nargs="+")
    o.set_defaults(fn=cmd_op)

    t = add("translate", "apply F or G")
    t.add_argument("functor", choices=("F", "G"))
    t.add_argument("id")
    t.set_defaults(fn=cmd_translate)

    lw = add("laws", "run a law suite")
    lw.add_argument("suite")
    lw.add_argument("--verbose", action="store_true")
    lw.set_defaults(fn=cmd_laws)

    tp = add("topos", "topos objects and arrows")
    tp.add_argument("action", choices=("validate", "compose", "embed"))
    tp.add_argument("ids", nargs="*")
    tp.set_defaults(fn=cmd_topos)

    r = add("reduce", "normalise a term")
    r.add_argument("term")
    r.set_defaults(fn=cmd_reduce)
    return ap


def run(argv: list[str]) -> tuple[int, str]:
    """Run a command and return the exit status and the report text."""
    fmt_machine = "--format" in argv and "machine" in argv
    try:
        args = build_parser().parse_args(argv)
        for k, v in GLOBAL_DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        fmt_machine = args.format == "machine"
        ws = parse_workspace(args.workspace) if args.workspace else Workspace()
        if args.fuel is not None:
            ws.fuel = args.fuel
            ws.pca = Pca(ws.pca.oracles, args.fuel)
        if args.pool_size is not None:
            ws.pool_size = args.pool_size
        if args.seed is not None:
            ws.seed = args.seed
        rep = Report(argv)
        args.fn(ws, args, rep)
    except (InputError, ParseError, OSError) as err:
        rep = Report(argv)
        rep.add("error", str(err))
        rep.exit = INPUT_ERROR
    return rep.exit, rep.machine() if fmt_machine else rep.text()


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    code, out = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(f"time: {time.perf_counter() - t0:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
