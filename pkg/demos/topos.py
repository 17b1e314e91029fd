"""
Booleans as a partial equivalence relation
==========================================

The two-element assembly of booleans becomes an object of the topos
through its diagonal, the swap becomes an arrow, and composing the swap
with itself gives the identity again up to witnessed equivalence.
Every condition is backed by a certificate that can be re-checked.
Run with ``python demos/topos.py``.
"""

from ewtopos import lam
from ewtopos.assemblies import Morphism, PartitionedAssembly, Pool, identity
from ewtopos.topos import (WeakSubobjectObject, arrow_equiv, compose, diagonal, discrete, embed_R,
                           graph, lr_identity, validate_arrow, validate_object)
from ewtopos.util import fmt

B = PartitionedAssembly([("t", lam.TRUE), ("f", lam.FALSE)])
pool = Pool(max_leaves=5)

# the diagonal relation, tagged by the name of each boolean
Bool = discrete(B)
v, certs = validate_object(Bool, pool)
print("Bool is an object:", v)
for c in certs:
    print(f"  {c.name}: ew({fmt(c.witness.ell1)}, {fmt(c.witness.ell2)})")

# the same object arrives through the embedding of the diagonal weak subobject
w = WeakSubobjectObject(B, diagonal(B))
print("embedding the diagonal gives Bool:", embed_R(w).rho == Bool.rho)
print("l after r is the identity:", lr_identity(w))

# graphs of carrier maps are functional relations
swap = graph(Morphism(B, B, {"t": "f", "f": "t"}), Bool, Bool)
ident = graph(identity(B), Bool, Bool)
v, res = validate_arrow(swap, pool)
print("swap is an arrow:", v)
for r in res:
    print(f"  {r.name}: {r.verdict}")

# composing computes in instance coordinates and searches fresh certificates
twice, v = compose(swap, swap, pool)
print("swap after swap has certificates:", v)
print("swap after swap is the identity:", arrow_equiv(twice, ident, pool)[0])
# the relations differ, but the order is only semi-decidable: a failed
# search reports unknown rather than fails
print("swap after swap is the swap:", arrow_equiv(twice, swap, pool)[0])
