"""
Two commuting translations
==========================

The tensor product of two transfer matrices gives a pair of commuting
nonnegative operators G_1, G_2.  Their joint eigenvalues (quasicharacters)
control the two-parameter counts N(k) = tr G_1^k1 G_2^k2, and the
generating function sum_k u^k T_k is rational.
"""

import numpy as np

from weighted_zeta import N_of_k, joint_spectrum, rational_T, verify_building_pgt, zeta_multivariate
from weighted_zeta.translations import f1_family

fam = f1_family()
print(f"d = {fam.d}, dim = {fam.dim}, radii = {np.round(fam.radii, 6)}")

qchars = joint_spectrum(fam)
for q in qchars:
    print("  quasicharacter", np.round(q.z, 6), "multiplicity", q.mult)

print("\nN(k) for k1 <= 6, k2 <= 4:")
for k1 in range(1, 7):
    print("  ", [int(N_of_k(fam, (k1, k2), exact=True)) for k2 in range(1, 5)])

rep = verify_building_pgt(fam, (9, 6), qchars)
print(f"\nquasicharacter sum matches on {len(rep.rows)} points, max deviation {rep.max_deviation:.1e}")

# %%
# Restricting to the index-2 sublattice {k1 + k2 even} changes the
# numerator of the rational form but not the quasicharacters.
even = f1_family(even_sublattice=True)
R = rational_T(even)
print("\nperiods", R.periods, "residues", [r for r, _ in R.residues])
u = (0.3, 0.4j)
ev = zeta_multivariate(even, u)
print(f"Z{u}: rational {ev.rational:.12f}")
print(f"       quasicharacters {ev.quasicharacter:.12f}")
print(f"       series {ev.series:.12f}")
