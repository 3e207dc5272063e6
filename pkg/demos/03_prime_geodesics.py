"""
Counting prime cycles
=====================

With spectral radius r > 1 the weighted cycle count N_m grows like
r^m times the number of peripheral eigenvalues, on the lengths m where
those eigenvalues line up.  The cumulative counts psi, theta and pi then
approach a constant C times r^m.
"""

from weighted_zeta import asymptotic_check, count_table, fixture, pgt_fit, pgt_parameters

for name in ("G3", "G4"):
    g = fixture(name)
    p = pgt_parameters(g, exact=True)
    print(f"{name}: r = {p.r:.9f}, periods {p.periods}, K = {p.K}, C = {p.exact_C()}, "
          f"gap = {p.eps_gap:.6f}")
    fit = pgt_fit(g, 12, exact=True)
    print("  residual N_m - leading term:", [str(x) for x in fit.residuals])

# %%
# On the two-triangle graph psi(3n) / 2^n equals 6 - 6/2^n on the nose.
# pi converges more slowly, with an error of order 1/n.
table = asymptotic_check(fixture("G3"), 15, exact=True)
print("\n n   psi ratio   theta ratio   pi ratio")
for row in table.rows:
    print(f"{row.n:2d}   {str(row.psi_ratio):>9}   {str(row.theta_ratio):>11}   {str(row.pi_ratio):>8}")

counts = count_table(fixture("G3"), 36, exact=True)
for n in (4, 8, 12):
    m = 3 * n
    print(f"m = {m}: m pi(m) / 2^n = {float(m * counts.pi[m] / 2 ** n):.4f}")
