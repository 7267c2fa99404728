#!/usr/bin/env python3
"""The adjoints of cup powers on Hochschild cohomology.

kappa_nm sends HH_{p^n m} to HH_m and generalizes the classical
Kulshammer kappa_n, which it reproduces at m = 0.  For odd p the p-th
cup power of an odd-degree class vanishes by graded commutativity, so
those operators degenerate to zero and carry a flag instead of failing.
"""

from derinv import GF, hh_cohomology, kappa_nm, make_group_algebra, t_nm_space, verify_properties
from derinv.algebras import cyclic_table, make_truncated_polynomial
from derinv.kulshammer import kappa_n

c4 = make_group_algebra(GF(2), cyclic_table(4))

print("GF(2)[C4]")
for m, n in ((0, 1), (0, 2), (1, 1), (2, 1)):
    kap = kappa_nm(c4, m, n)
    t = t_nm_space(c4, m, n)
    print(f"  kappa_{n}^({m}): HH_{kap.source_degree} -> HH_{m}, "
          f"rank {kap.rank}, dim T = {t.dim}, "
          f"rank + dim T = dim HH^{m} = {hh_cohomology(c4, m).dim}")

# at m = 0 the operator matrix is the classical kappa_n on A/KA
assert kappa_nm(c4, 0, 1).operator == kappa_n(c4, 1)
print("  kappa_1^(0) equals the classical kappa_1 entrywise")

# odd characteristic, odd degree: the zero regime
t33 = make_truncated_polynomial(GF(3), 3)
kap = kappa_nm(t33, 1, 1)
print()
print(f"GF(3)[x]/(x^3): kappa_1^(1) zero_regime={kap.zero_regime}, rank {kap.rank}")

# the full property report for one configuration
rep = verify_properties(c4, 1, 1, 1)
print()
print("verify_properties(GF(2)[C4], m=1, n=1, ell=1):")
for key in ("semilinear_defining_relation", "composition",
            "image_is_orthogonal_of_t", "kernel_is_orthogonal_of_powers",
            "dimension_formula", "all_passed"):
    print(f"  {key}: {rep[key]}")
