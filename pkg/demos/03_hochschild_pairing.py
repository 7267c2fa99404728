#!/usr/bin/env python3
"""Hochschild homology and cohomology from the bar complex, and the
non-degenerate pairing between them induced by the symmetrizing form."""

import numpy as np

from derinv import GF, hh_cohomology, hh_homology, make_group_algebra, pairing, pairing_gram
from derinv.algebras import cyclic_table, make_truncated_polynomial

dual = make_truncated_polynomial(GF(2), 2)
c4 = make_group_algebra(GF(2), cyclic_table(4))

for name, a in (("GF(2)[x]/(x^2)", dual), ("GF(2)[C4]", c4)):
    hom = [hh_homology(a, m).dim for m in range(4)]
    coh = [hh_cohomology(a, m).dim for m in range(4)]
    print(f"{name}: dim HH_m = {hom}, dim HH^m = {coh}")

# the pairing gram matrix on canonical class bases is invertible in
# every degree; here it is for the dual numbers in degree 2
g = pairing_gram(dual, 2)
print()
print("pairing gram of GF(2)[x]/(x^2) in degree 2:")
print(g.data)
print(f"rank {g.rank()} == dim HH^2 = {hh_cohomology(dual, 2).dim}")

# a single pairing value: (f, a0 x a1 x a2) = (a0, f(a1, a2))
coh2 = hh_cohomology(dual, 2)
hom2 = hh_homology(dual, 2)
f = coh2.cochain(0)
chain = hom2.rep_vector(0)
print(f"(f_0, x_0) = {pairing(f, chain)}")

# descent: a coboundary pairs to zero with every cycle
from derinv.hochschild import Cochain, boundary_matrix, coboundary
from derinv.linalg import Mat

rng = np.random.default_rng(7)
raw = Cochain(dual, 2, Mat(dual.field, rng.integers(0, 2, size=(2, 4)).astype(np.int8)))
df = coboundary(raw)  # arity-3 coboundary of a random 2-cochain
cycles = boundary_matrix(dual, 3).kernel()
vals = [pairing(df, cycles.data[i]) for i in range(cycles.rows)]
print(f"coboundary against all {cycles.rows} cycle basis vectors: {sorted(set(vals))}")
