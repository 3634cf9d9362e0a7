"""Total-field maps: band gap versus pass band.

Writes one CSV per wavenumber (x, y, Re Phi, Im Phi) suitable for any
plotting tool, and prints the field level deep inside the lattice: in a
band gap the quadrant shields its interior almost perfectly, in a pass
band waves travel through.
"""

import math
import pathlib

import numpy as np

from quarterlattice import PhysicalConfig, direct_foldy_solve, sample_total_field

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

N = 24
for k_mult in (2, 4, 8):
    cfg = PhysicalConfig(k=k_mult * math.pi, s=0.1, a=0.001, theta_inc=-3 * math.pi / 4)
    coeffs = direct_foldy_solve(cfg, N)
    grid = sample_total_field(coeffs, cfg, (-1.0, 3.0), (-1.0, 3.0), 160, 160)
    deep = grid.values[np.argmin(np.abs(grid.y - 1.25)), np.argmin(np.abs(grid.x - 1.25))]
    outside = grid.values[np.argmin(np.abs(grid.y - 1.5)), np.argmin(np.abs(grid.x + 0.5))]
    print(f"k = {k_mult} pi: |Phi| deep inside = {abs(deep):.2e}, "
          f"outside = {abs(outside):.2f}")
    path = OUT / f"total_field_k{k_mult}pi.csv"
    xx, yy = np.meshgrid(grid.x, grid.y)
    rows = np.column_stack([xx.ravel(), yy.ravel(),
                            grid.values.ravel().real, grid.values.ravel().imag])
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header="x,y,re,im", comments="")
    print(f"  wrote {path}")
