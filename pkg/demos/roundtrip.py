"""
Predicates with instances, and the same thing as Weihrauch problems
===================================================================

A predicate over a one-point assembly given by a display map with two
instances is sent to an extended Weihrauch predicate and back, and each
inequality of the round trip is checked by running its witness terms.
Run with ``python demos/roundtrip.py``.
"""

from ewtopos import lam
from ewtopos.assemblies import Morphism, PartitionedAssembly
from ewtopos.instance import IRPredicate, iR_leq
from ewtopos.syntax import term
from ewtopos.terms import K, S
from ewtopos.util import fmt, fmt_set
from ewtopos.weihrauch import (FG_COUNIT, FG_UNIT, FG_UNIT_LITERAL, EWPredicate, gf_counit,
                               gf_unit, leq_extW, to_eW, to_iR)

# a base with a single point, named by the identity combinator
One = PartitionedAssembly([("pt", lam.I)])

# two instances over that point, named K and S; the display forgets the name
Y = PartitionedAssembly([("y1", K), ("y2", S)])
f = Morphism(Y, One, {"y1": "pt", "y2": "pt"}, term("\\x. I"))
print("display realizer verifies:", f.verify())

# each instance asks for a realizer from its value set
p = IRPredicate(f, {"y1": [K], "y2": [S]})

# F groups instances by their name: the point has two tags, one per instance
Fp = to_eW(p)
for (x, a), outer in Fp.items():
    print(f"F(p) at ({x}, {fmt(a)}):", ", ".join(fmt_set(A) for A in outer))

# G rebuilds a display whose elements are (point, tag, value set)
GFp = to_iR(Fp)
print("carrier of G(F(p)):", ", ".join(fmt(e) for e in GFp.source))

# both directions of G(F(p)) = p come with explicit witnesses
print("p <= G(F(p)):", iR_leq(p, GFp, gf_unit(p)))
print("G(F(p)) <= p:", iR_leq(GFp, p, gf_counit(p)))

# the other composite, starting from a Weihrauch predicate
g = EWPredicate(One, {("pt", K): [[S]]})
FGg = to_eW(to_iR(g))
print("F(G(g)) <= g via (\\x. p2 (p2 x), p2):", leq_extW(FGg, g, FG_COUNIT))
print("g <= F(G(g)) via (I, p2):", leq_extW(g, FGg, FG_UNIT))

# k turns the tag into a constant function, which F(G(g)) does not support
print("g <= F(G(g)) via (k, p2):", leq_extW(g, FGg, FG_UNIT_LITERAL))
