#!/usr/bin/env python3
"""The flagship computation: GF(2)[C4] and GF(2)[C2xC2] have the same
dimension, center, and Cartan data, but their Kulshammer spaces differ,
certifying that they are not derived equivalent."""

from derinv import GF, compare, compute_signature, make_group_algebra
from derinv.algebras import cyclic_table, klein_table
from derinv.kulshammer import kulshammer_report

c4 = make_group_algebra(GF(2), cyclic_table(4), kind={"group": "C4"})
v4 = make_group_algebra(GF(2), klein_table(), kind={"group": "C2xC2"})

for name, a in (("GF(2)[C4]", c4), ("GF(2)[C2xC2]", v4)):
    rep = kulshammer_report(a, 3)
    print(f"{name}: dim {rep['dim']}, center {rep['dim_center']}, "
          f"A/KA {rep['dim'] - rep['dim_ka']}")
    print(f"  dim T_n for n=0..3:        {rep['t_dims']}")
    print(f"  dim im zeta_n for n=1..3:  {rep['zeta_image_dims']}")
    print(f"  stabilization index:       {rep['stabilization_index']}")

sig_c4 = compute_signature(c4)
sig_v4 = compute_signature(v4)
verdict = compare(sig_c4, sig_v4)

print()
print(f"verdict: {verdict['verdict']}")
print("differing entries:")
for d in verdict["differences"]:
    print(f"  {d['key']}: {d['a']} vs {d['b']}")
