"""Comparison suite: system residuals, symmetry, decay profiles, truncation sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import CoeffGrid, PhysicalConfig
from .errors import DomainError
from .lattice import incident_lattice_values, interaction_tensor


@dataclass
class ComparisonReport:
    """Absolute coefficient difference between two methods."""

    method_a: str
    method_b: str
    abs_diff: np.ndarray
    max_diff: float = field(init=False)
    interior_max_diff: float = field(init=False)

    def __post_init__(self):
        self.abs_diff = np.asarray(self.abs_diff, dtype=float)
        n = self.abs_diff.shape[0] - 1
        half = n // 2
        self.max_diff = float(self.abs_diff.max())
        # truncation error concentrates at the cut edges, so the block of
        # indices <= N/2 is the meaningful agreement metric
        self.interior_max_diff = float(self.abs_diff[:half + 1, :half + 1].max())


def compare(a: CoeffGrid, b: CoeffGrid, label_a: str = "a", label_b: str = "b") -> ComparisonReport:
    if a.N != b.N:
        raise DomainError(f"coefficient grids differ in size: {a.N} vs {b.N}")
    return ComparisonReport(label_a, label_b, np.abs(a.values - b.values))


def system_residual(coeffs: CoeffGrid, cfg: PhysicalConfig) -> np.ndarray:
    """Per-equation magnitude of the truncated lattice system residual."""
    n = coeffs.N
    tensor = interaction_tensor(cfg, n, n, exclude="self")
    lhs = np.einsum("pqmn,mn->pq", tensor, coeffs.values)
    return np.abs(lhs + incident_lattice_values(cfg, n))


def symmetry_defect(coeffs: CoeffGrid) -> float:
    """max |A_mn - A_nm|: zero for diagonal-symmetric incidence."""
    return float(np.abs(coeffs.values - coeffs.values.T).max())


def decay_profile(coeffs: CoeffGrid, path: tuple) -> np.ndarray:
    """|A| along a row, column or rational-slope diagonal.

    path is ("row", r), ("col", c) or ("diag", (alpha, beta)) meaning the
    lattice points (alpha p, beta p) for p = 0, 1, ... while inside the grid.
    """
    kind = path[0]
    n = coeffs.N
    if kind == "row":
        r = path[1]
        if not 0 <= r <= n:
            raise DomainError(f"row {r} outside grid of size {n + 1}")
        return np.abs(coeffs.values[:, r])
    if kind == "col":
        c = path[1]
        if not 0 <= c <= n:
            raise DomainError(f"column {c} outside grid of size {n + 1}")
        return np.abs(coeffs.values[c, :])
    if kind == "diag":
        alpha, beta = path[1]
        if alpha < 1 or beta < 1:
            raise DomainError("diagonal slopes must be positive integers")
        steps = n // max(alpha, beta) + 1
        p = np.arange(steps)
        return np.abs(coeffs.values[alpha * p, beta * p])
    raise DomainError(f"unknown path kind {kind!r}")


def fit_decay_slope(profile: np.ndarray, lo: int, hi: int) -> float:
    """Least-squares slope of log|A| over indices [lo, hi]."""
    p = np.arange(lo, hi + 1)
    vals = np.asarray(profile, dtype=float)[lo:hi + 1]
    if np.any(vals <= 0):
        raise DomainError("profile has zeros inside the fit window")
    return float(np.polyfit(p, np.log(vals), 1)[0])


def truncation_sweep(cfg: PhysicalConfig, n_list: list[int], method) -> dict:
    """Main-diagonal |A_pp| profiles per truncation, with a convergence metric.

    method maps (cfg, N) to a CoeffGrid.  The metric tracks, between
    consecutive truncations, the maximum relative change over p <= 10.
    """
    if sorted(n_list) != list(n_list):
        raise DomainError("n_list must be ascending")
    profiles = {}
    for n in n_list:
        grid = method(cfg, n)
        profiles[n] = decay_profile(grid, ("diag", (1, 1)))
    metric = []
    for n_prev, n_cur in zip(n_list, n_list[1:]):
        upto = min(10, n_prev)
        a = profiles[n_prev][:upto + 1]
        b = profiles[n_cur][:upto + 1]
        metric.append(float(np.max(np.abs(a - b) / np.abs(b))))
    return {"profiles": profiles, "consecutive_change": metric}
