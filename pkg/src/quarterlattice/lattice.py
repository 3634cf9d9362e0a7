"""Discrete-lattice helpers shared by the solvers and diagnostics."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .bessel import hankel1_0_array
from .config import PhysicalConfig


def neighbor_set_contains(p: int, q: int, m: int, n: int) -> bool:
    """True iff (m, n) lies in the 3x3 neighbour block of (p, q), self included."""
    if min(p, q, m, n) < 0:
        raise ValueError("lattice indices must be non-negative")
    return abs(p - m) <= 1 and abs(q - n) <= 1


@lru_cache(maxsize=32)
def hankel_lattice_table(cfg: PhysicalConfig, dmax: int) -> np.ndarray:
    """Table T[i, j] = H0(ks sqrt(i^2 + j^2)) for 0 <= i, j <= dmax.

    T[0, 0] holds the monopole constant C, which is what multiplies the
    self coefficient in the lattice equations.  The array is read-only so
    the cache can be shared safely.
    """
    i = np.arange(dmax + 1)
    dist = np.sqrt((i[:, None] ** 2 + i[None, :] ** 2).astype(float))
    dist[0, 0] = 1.0
    table = hankel1_0_array(cfg.ks * dist)
    table[0, 0] = cfg.kernel_constants().monopole
    table.setflags(write=False)
    return table


def incident_lattice_values(cfg: PhysicalConfig, N: int) -> np.ndarray:
    """Incident plane wave at the scatterer centres: e^{-i ks (m cos + n sin)}."""
    m = np.arange(N + 1)
    phase = m[:, None] * np.cos(cfg.theta_inc) + m[None, :] * np.sin(cfg.theta_inc)
    return np.exp(-1j * cfg.ks * phase)


def interaction_tensor(cfg: PhysicalConfig, rows: int, cols: int,
                       exclude: str) -> np.ndarray:
    """4D tensor H[p, q, m, n] = H0(ks |(p,q) - (m,n)|) over [0,rows]x[0,cols].

    exclude = "self" zeroes the coincident entries and puts the monopole
    constant C there instead (full lattice system); exclude = "neighbors"
    zeroes the whole 3x3 neighbour block (coupling to distant scatterers).
    """
    table = hankel_lattice_table(cfg, max(rows, cols))
    p = np.arange(rows + 1)
    m = np.arange(cols + 1)
    dp = np.abs(p[:, None] - m[None, :])
    out = table[dp[:, None, :, None], dp[None, :, None, :]].copy()
    if exclude == "neighbors":
        near = (dp <= 1)
        out[near[:, None, :, None] & near[None, :, None, :]] = 0
    elif exclude != "self":
        raise ValueError("exclude must be 'self' or 'neighbors'")
    return out
