"""Reference solvers: the truncated lattice system and least-squares collocation.

``direct_foldy_solve`` inverts the point-scatterer equations truncated to the
(N+1)^2 visible scatterers; it is the designated brute-force oracle for
cross-method comparisons.  ``lsc_solve`` instead enforces the sound-soft
condition in the least-squares sense at collocation points on every cylinder
boundary, which retains some multipole content the point model discards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import hankel1_0_array
from .config import CoeffGrid, PhysicalConfig
from .errors import DomainError, RankDeficiencyError, SingularMatrixError
from .lattice import incident_lattice_values, interaction_tensor


@dataclass(frozen=True)
class LscSpec:
    """Collocation control: points are equiangular on each boundary circle,
    starting at angle 0."""

    n_colloc: int = 16

    def __post_init__(self):
        if self.n_colloc < 3:
            raise DomainError("n_colloc must be at least 3")


def _gated_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    cond = np.linalg.cond(matrix, 1)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMatrixError(f"system 1-norm condition {cond:.3e} exceeds 1e12")
    return np.linalg.solve(matrix, rhs)


def direct_foldy_solve(cfg: PhysicalConfig, N: int) -> CoeffGrid:
    """Solve the truncated point-scatterer system over 0 <= p, q <= N.

    Row (p, q):  C A_pq + sum_{(m,n) != (p,q)} A_mn H0(ks d) = -e^{-i ks Theta(p,q)}.
    """
    tensor = interaction_tensor(cfg, N, N, exclude="self")
    matrix = tensor.transpose(1, 0, 3, 2).reshape((N + 1) ** 2, (N + 1) ** 2)
    rhs = CoeffGrid(-incident_lattice_values(cfg, N)).to_vector()
    return CoeffGrid.from_vector(_gated_solve(matrix, rhs))


def lsc_solve(cfg: PhysicalConfig, N: int, lsc: LscSpec = LscSpec()) -> CoeffGrid:
    """Least-squares collocation over the same (N+1)^2 scatterers.

    Rows sample H0(k |r_c - R_mn|) at lsc.n_colloc boundary points per
    scatterer against -Phi_I(r_c); the minimizer of the 2-norm misfit is
    returned in the canonical coefficient layout.
    """
    side = N + 1
    idx = np.arange(side)
    # centre coordinates in canonical vector order (m fastest)
    cm, cn = np.meshgrid(idx, idx, indexing="ij")
    cx = CoeffGrid(cm * cfg.s + 0j).to_vector().real
    cy = CoeffGrid(cn * cfg.s + 0j).to_vector().real
    ang = 2 * np.pi * np.arange(lsc.n_colloc) / lsc.n_colloc
    px = (cx[:, None] + cfg.a * np.cos(ang)[None, :]).ravel()
    py = (cy[:, None] + cfg.a * np.sin(ang)[None, :]).ravel()
    dist = np.hypot(px[:, None] - cx[None, :], py[:, None] - cy[None, :])
    matrix = hankel1_0_array(dist * cfg.k)
    rhs = -np.exp(-1j * cfg.k * (px * np.cos(cfg.theta_inc) + py * np.sin(cfg.theta_inc)))
    coeffs, _, rank, _ = np.linalg.lstsq(matrix, rhs, rcond=None)
    if rank < side * side:
        raise RankDeficiencyError(f"collocation matrix rank {rank} < {side * side} unknowns")
    return CoeffGrid.from_vector(coeffs)
