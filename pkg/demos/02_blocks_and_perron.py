"""
Block structure and the Perron root
===================================

Adding a loop that feeds into the two-triangle graph (but is never fed
back) makes the transfer matrix reducible.  Its determinant then splits
over the strongly connected pieces, and each piece with positive spectral
radius has the rotationally symmetric peripheral spectrum of a nonnegative
irreducible matrix.
"""

import numpy as np

from weighted_zeta import build_bass, decompose, fixture, fredholm_coeffs, verify_pf
from weighted_zeta.spectral import poly_product

g = fixture("G4")
T = build_bass(g)
dec = decompose(T)

for k, b in enumerate(dec.blocks):
    tag = "below full radius" if b.sub_radius else "full radius"
    print(f"block {k}: edges {b.indices}  r = {b.radius:.6f}  ({tag})")
print("every prefix of blocks is invariant:", dec.prefix_invariant())

polys = dec.block_polynomials(exact=True)
for k, p in enumerate(polys):
    print(f"det(1 - u T_{k}) =", [str(c) for c in p])
print("product   =", [str(c) for c in poly_product(polys, exact=True)])
print("whole det =", [str(c) for c in fredholm_coeffs(T, exact=True)])

# %%
# The big block has period 3: its peripheral eigenvalues are r times the
# cube roots of unity, and its Perron vector is strictly positive.
rep = verify_pf(dec.blocks[0].matrix)
print(f"\nr = {rep.radius:.9f} = 2^(1/3)? {np.isclose(rep.radius, 2 ** (1 / 3))}")
for lam in rep.peripheral:
    print(f"  peripheral {lam:.6f}  angle/(2pi) = {np.angle(lam) / (2 * np.pi) % 1:.4f}")
print("combinatorial period:", rep.combinatorial_period)
print("Perron vector:", np.round(rep.vector, 6))
