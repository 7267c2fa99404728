#!/usr/bin/env python3
"""Kulshammer ideal chains across small group and local algebras.

For a group algebra the stabilization index of the descending chain
im zeta_1 >= im zeta_2 >= ... recovers log_p of the group exponent, an
invariant the ordinary character table cannot see in characteristic p.
"""

from derinv import GF, make_group_algebra, make_truncated_polynomial, stabilization_index
from derinv.algebras import cyclic_table, klein_table
from derinv.kulshammer import t_n_space, zeta_image

ALGEBRAS = [
    ("GF(2)[C2]", make_group_algebra(GF(2), cyclic_table(2))),
    ("GF(2)[C4]", make_group_algebra(GF(2), cyclic_table(4))),
    ("GF(2)[C8]", make_group_algebra(GF(2), cyclic_table(8))),
    ("GF(2)[C2xC2]", make_group_algebra(GF(2), klein_table())),
    ("GF(3)[C3]", make_group_algebra(GF(3), cyclic_table(3))),
    ("GF(3)[C9]", make_group_algebra(GF(3), cyclic_table(9))),
    ("GF(2)[x]/(x^4)", make_truncated_polynomial(GF(2), 4)),
    ("GF(3)[x]/(x^3)", make_truncated_polynomial(GF(3), 3)),
]

print(f"{'algebra':16s} {'dim':>3s}  {'dim T_n (n=1..4)':18s} {'dim im zeta_n':16s} stab")
for name, a in ALGEBRAS:
    t_dims = [t_n_space(a, n).dim for n in range(1, 5)]
    z_dims = [zeta_image(a, n).dim for n in range(1, 5)]
    idx = stabilization_index(a)
    print(f"{name:16s} {a.dim:3d}  {str(t_dims):18s} {str(z_dims):16s} {idx:4d}")

print()
print("zeta images are orthogonal complements of the T_n spaces, so each")
print("column pair satisfies dim T_n + dim im zeta_n = dim A.")
