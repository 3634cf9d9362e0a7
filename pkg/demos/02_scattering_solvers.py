"""Three routes to the scattering coefficients, compared.

* qlnn   - the Wiener-Hopf reduction with nearest-neighbour coupling,
* direct - dense inversion of the truncated point-scatterer system,
* lsc    - least-squares collocation on the cylinder boundaries.

The two lattice truncations distort the outermost rows, so methods are
compared over the interior block (indices <= N/2).  The system residual of
the Wiener-Hopf solution shows its signature pattern: machine zero on every
interior equation, O(1) only on the truncated edge row and column.
"""

import math

import numpy as np

from quarterlattice import (PhysicalConfig, TruncationSpec, direct_foldy_solve,
                            lsc_solve, solve, symmetry_defect, system_residual)
from quarterlattice.diagnostics import compare

cfg = PhysicalConfig(k=2 * math.pi, s=0.1, a=0.001, theta_inc=-3 * math.pi / 4)
N = 16

print(f"solving the {N + 1}x{N + 1} quadrant corner at k = 2 pi ...")
a_wh = solve(cfg, TruncationSpec(N=N))
a_direct = direct_foldy_solve(cfg, N)
a_lsc = lsc_solve(cfg, N)

print(f"\ncorner coefficient A_00 = {a_wh.values[0, 0]:.8f} (Wiener-Hopf)")
print(f"                         {a_direct.values[0, 0]:.8f} (direct)")
print(f"                         {a_lsc.values[0, 0]:.8f} (collocation)")

for label, other in (("direct", a_direct), ("collocation", a_lsc)):
    rep = compare(a_wh, other, "wiener-hopf", label)
    print(f"\nWiener-Hopf vs {label}: max |dA| = {rep.max_diff:.2e}, "
          f"interior (<= N/2) = {rep.interior_max_diff:.2e}")

res = system_residual(a_wh, cfg)
print(f"\nWiener-Hopf system residual: interior max = {res[:N - 1, :N - 1].max():.2e}, "
      f"edge max = {res.max():.2e}")
print("(the residual lives entirely on the truncated edge row and column)")

print(f"\nsymmetry defect along the lattice diagonal (theta = -3 pi/4 is symmetric):")
print(f"  wiener-hopf {symmetry_defect(a_wh):.2e}   direct {symmetry_defect(a_direct):.2e}")

diag = np.abs(np.diagonal(a_wh.values))
print("\n|A_pp| along the main diagonal (band gap: exponential decay):")
print("  " + "  ".join(f"{v:.2e}" for v in diag[:9]))
