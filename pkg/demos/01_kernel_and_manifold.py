"""Tour of the Wiener-Hopf kernel and its manifold.

The two-variable kernel K(z, zeta) factorizes through L1 and L2, and its
zero set in zeta is described by the manifold function M(z): the root of
zeta^2 + (L1/L2) zeta + 1 that stays inside the unit disk.  This script
prints the derived constants and demonstrates the identities the solver
relies on: K vanishing on the manifold, reciprocal symmetry, self-inversion,
and the removable singularity at the zero b2 of L2.
"""

import math

import numpy as np

from quarterlattice import (PhysicalConfig, eval_K, eval_L2, manifold_M,
                            manifold_M_over_L2)

for k_mult in (2, 4, 8):
    cfg = PhysicalConfig(k=k_mult * math.pi, s=0.1, a=0.001, theta_inc=-3 * math.pi / 4)
    kc = cfg.kernel_constants()
    print(f"\n=== k = {k_mult} pi  (ks = {cfg.ks:.3f}, ka = {cfg.ka:.4f}) ===")
    print(f"  monopole constant C = {kc.monopole:.6f}")
    print(f"  removable singularity |b2| = {abs(kc.b2):.4f}")
    print(f"  branch points |c2| = {abs(kc.c2):.4f}, |d2| = {abs(kc.d2):.4f} "
          "(all inside the unit circle, so contour quadrature never deforms)")

    z = np.exp(2j * np.pi * np.linspace(0, 1, 721)[:-1])
    m = manifold_M(z, kc)
    print(f"  on |z| = 1: |M| ranges [{np.abs(m).min():.3f}, {np.abs(m).max():.3f}]")
    print(f"  max |K(z, M(z))|          = {np.max(np.abs(eval_K(z, m, kc))):.2e}")
    print(f"  max |M(z) - M(1/z)|       = {np.max(np.abs(m - manifold_M(1 / z, kc))):.2e}")
    upper = np.exp(1j * np.pi * np.linspace(0.01, 0.99, 200))
    print(f"  max |M(M(z)) - z| (Im z>0) = "
          f"{np.max(np.abs(manifold_M(manifold_M(upper, kc), kc) - upper)):.2e}")

    # the quotient M/L2 stays finite across the zero of L2
    near = kc.b2 + 1e-6 * np.exp(0.3j)
    print(f"  M/L2 at b2 (limit form)    = {manifold_M_over_L2(kc.b2, kc):.6f}")
    print(f"  M/L2 just off b2 (quotient)= {manifold_M(near, kc) / eval_L2(near, kc):.6f}")
