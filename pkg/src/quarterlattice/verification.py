"""Cross-checks built from the intermediate Wiener-Hopf objects.

The production solver never materializes the half-range transforms, the
one-variable unknown B2+ or the sum-split forcing parts; this module builds
them from a candidate coefficient set (normally the direct lattice solve, so
failures stay attributable) and exposes the residue/functional-equation
identities as numerical checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import CoeffGrid, PhysicalConfig, TruncationSpec
from .contour import ContourSpec, alias_sum
from .errors import DomainError
from .kernel import KernelConstants, eval_K, eval_L2, manifold_M
from .lattice import interaction_tensor
from .solver import _entry_gate, _safe_node_count


@dataclass
class SpectralState:
    """Candidate coefficients plus their distant-interaction table S_A.

    s_a[p, q] sums A_mn H0(ks d) over every stored (m, n) outside the 3x3
    neighbour block of (p, q); the tail beyond the stored truncation is
    dropped, and that neglect is measured, not assumed.
    """

    coeffs: CoeffGrid
    s_a: np.ndarray

    @classmethod
    def from_coeffs(cls, coeffs: CoeffGrid, cfg: PhysicalConfig) -> "SpectralState":
        n = coeffs.N
        tensor = interaction_tensor(cfg, n, n, exclude="neighbors")
        return cls(coeffs=coeffs, s_a=np.einsum("pqmn,mn->pq", tensor, coeffs.values))

    @property
    def N(self) -> int:
        return self.coeffs.N


def z_transform_A(state: SpectralState, z: complex, zeta: complex) -> complex:
    """Double half-range transform sum A_pq z^p zeta^q over the stored grid."""
    n = state.N
    return complex(z ** np.arange(n + 1) @ state.coeffs.values @ zeta ** np.arange(n + 1))


def _b1_series(state: SpectralState, z: complex) -> complex:
    return complex(state.coeffs.values[:, 0] @ z ** np.arange(state.N + 1))


def _b2_series(state: SpectralState, zeta: complex) -> complex:
    return complex(state.coeffs.values[0, :] @ zeta ** np.arange(state.N + 1))


def functional_equation_residual(state: SpectralState, cfg: PhysicalConfig,
                                 z: complex, zeta: complex) -> complex:
    """Residual of the two-variable functional equation at (z, zeta).

    z zeta K A++ - z L2(z) B1+ - zeta L2(zeta) B2+ + A_00 H0(ks sqrt(2))
    - z zeta F++, all transforms and S_A truncated at the state's N.  On the
    unit circle the truncated tails of the incident geometric series do not
    decay, so meaningful magnitudes require |z|, |zeta| < 1.
    """
    kc = cfg.kernel_constants()
    n = state.N
    pw_z = z ** np.arange(n + 1)
    pw_t = zeta ** np.arange(n + 1)
    a_pp = pw_z @ state.coeffs.values @ pw_t
    forcing = -1 / ((1 - cfg.z_c * z) * (1 - cfg.z_s * zeta)) - pw_z @ state.s_a @ pw_t
    return complex(
        z * zeta * eval_K(z, zeta, kc) * a_pp
        - z * eval_L2(z, kc) * _b1_series(state, z)
        - zeta * eval_L2(zeta, kc) * _b2_series(state, zeta)
        + state.coeffs.values[0, 0] * kc.h2
        - z * zeta * forcing)


# ---------------------------------------------------------------------------
# B2+ via its explicit contour-integral solution
# ---------------------------------------------------------------------------

def _choose_phase(cfg: PhysicalConfig, zeta: complex, Q: int) -> float:
    """Half-step-rotate the grid if a removed pole would sit on a node."""
    specials = [cfg.z_s, 1 / cfg.z_s]
    if zeta != 0:
        specials.append(1 / zeta)
    best_phase, best_gap = 0.0, -1.0
    for phase in (0.0, math.pi / Q):
        gap = 2.0
        for w in specials:
            frac = ((math.atan2(w.imag, w.real) - phase) * Q / (2 * math.pi)) % 1.0
            gap = min(gap, min(frac, 1 - frac))
        if gap > best_gap:
            best_phase, best_gap = phase, gap
    return best_phase


def _b2_plus_once(kc: KernelConstants, cfg: PhysicalConfig, state: SpectralState,
                  zeta: complex, Q: int) -> complex:
    zs, zc = cfg.z_s, cfg.z_c
    zs_inside = math.sin(cfg.theta_inc) < 0
    grid = ContourSpec(Q, phase=_choose_phase(cfg, zeta, Q))
    z = grid.nodes
    mz, l2z = manifold_M(z, kc), eval_L2(z, kc)
    m_zs = manifold_M(zs, kc)
    e_zs = m_zs / (eval_L2(zs, kc) * (1 - zc * m_zs))
    kern = np.ones(Q, dtype=complex) if zeta == 0 else 1 / (1 - zeta * z)

    # incident part: integrand E(z) D(z) / (1 - zeta z)
    e_z = mz / (l2z * (1 - zc * mz))
    d_z = 1 / (z - zs) - z / (1 - zs * z)
    r_s = e_zs / (1 - zeta * zs)
    r_sig = e_zs / (zs * (zs - zeta))
    samples = e_z * d_z * kern - r_s / (z - zs) - r_sig / (z - 1 / zs)
    if zeta != 0:
        w = 1 / zeta
        m_w = manifold_M(w, kc)
        e_w = m_w / (eval_L2(w, kc) * (1 - zc * m_w))
        d_w = 1 / (w - zs) - w / (1 - zs * w)
        samples = samples - (-e_w * d_w / zeta) / (z - w)
    inc_part = samples @ grid.weights + (r_s if zs_inside else r_sig)

    # coupling part: sum_pq S_A(p, q) I1(p, q, zeta)
    n = state.N
    exps = np.arange(1, n + 2)
    mzp = mz[None, :] ** exps[:, None]
    zq = z[None, :] ** exps[:, None]
    gmat = (mzp[:, None, :] * ((1 / zq - zq) / l2z)[None, :, :])  # [p, q, j]
    i1 = gmat.reshape(-1, Q) @ (kern * grid.weights)
    if zeta != 0:
        w = 1 / zeta
        m_w, l2_w = manifold_M(w, kc), eval_L2(w, kc)
        wq = w ** exps
        g_w = (m_w ** exps)[:, None] * ((1 / wq - wq) / l2_w)[None, :]
        i1 = i1 - (-g_w.reshape(-1) / zeta) * alias_sum(w, grid)
    coupling_part = state.s_a.reshape(-1) @ i1
    return complex(inc_part + coupling_part)


def b2_plus(state: SpectralState, cfg: PhysicalConfig, zeta: complex,
            spec: TruncationSpec) -> complex:
    """One-variable Wiener-Hopf unknown B2+(zeta) from its integral solution.

    The incident term keeps the z_s residue (inside) and drops 1/z_s and
    1/zeta (outside); the coupling term truncates the forcing via the state's
    S_A table, so it inherits the candidate coefficients' truncation.
    """
    if abs(zeta - 1 / cfg.z_s) < 1e-9:
        raise DomainError("B2+ has its pole at 1/z_s")
    kc = cfg.kernel_constants()
    return _entry_gate(lambda q: _b2_plus_once(kc, cfg, state, complex(zeta), q),
                       cfg, spec)


# ---------------------------------------------------------------------------
# residue identities
# ---------------------------------------------------------------------------

def appendix_c_check(z: complex, n: int, q: int, cfg: PhysicalConfig,
                     spec: TruncationSpec) -> dict:
    """Quadrature vs closed forms for the three zeta-residue integrals.

    Returns per-identity relative deviations and their maximum; the closed
    forms all reduce to powers of M(z) over L2(z) (M(z)^2 - 1).  Those
    references shrink like |M|^n while the integrand samples stay O(1), so
    the quadrature runs in extended precision to keep its cancellation noise
    below the relative targets even at |M| ~ 0.1 with n = 7.
    """
    kc = cfg.kernel_constants()
    q_nodes = _safe_node_count(cfg, spec.quad_nodes)
    ang = (2 * np.pi * np.arange(q_nodes) / q_nodes).astype(np.longdouble)
    t = np.cos(ang) + 1j * np.sin(ang)
    zl = np.clongdouble(z)
    l1 = np.clongdouble(kc.monopole) + (zl + 1 / zl) * np.clongdouble(kc.h1)
    l2 = np.clongdouble(kc.h1) + (zl + 1 / zl) * np.clongdouble(kc.h2)
    half = l1 / (2 * l2)
    m = -half + np.sqrt(half - 1) * np.sqrt(half + 1)
    kv = l1 + (t + 1 / t) * l2
    weights = t / q_nodes
    base = m / (l2 * (m * m - 1))

    quad_a = np.sum(t ** (-n - 2) / kv * weights)
    ref_a = base * m ** (n + 1)

    zs = np.clongdouble(cfg.z_s)
    pole = 1 / zs
    kv_pole = l1 + (pole + 1 / pole) * l2
    res = pole ** (-n - 1) / (kv_pole * zs)
    quad_b = np.sum((t ** (-n - 1) / (kv * (zs * t - 1)) - res / (t - pole)) * weights)
    ref_b = -m / (l2 * (m - zs)) * (m ** (n + 1) / (m * m - 1)
                                    - zs ** (n + 1) / (zs * m - 1))

    quad_c = np.sum(t ** (q - n - 1) / kv * weights)
    ref_c = base * m ** abs(n - q)

    devs = {
        "inverse_power": float(abs(quad_a - ref_a) / abs(ref_a)),
        "incident_pole": float(abs(quad_b - ref_b) / abs(ref_b)),
        "shifted_power": float(abs(quad_c - ref_c) / abs(ref_c)),
    }
    closed = {"inverse_power": complex(ref_a), "incident_pole": complex(ref_b),
              "shifted_power": complex(ref_c)}
    return {"deviations": devs, "closed_forms": closed,
            "max_deviation": max(devs.values())}


# ---------------------------------------------------------------------------
# additive splitting
# ---------------------------------------------------------------------------

def cauchy_split(fsamples: np.ndarray, spec: ContourSpec,
                 queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Plus/minus split of a function analytic in an annulus around |z| = 1.

    The split integrals reduce to the non-negative / negative Laurent
    coefficients of f (constants land in the plus part), which is how they
    are evaluated here; queries must stay off the sampling contour.
    """
    queries = np.atleast_1d(np.asarray(queries, dtype=complex))
    if np.any(np.abs(np.abs(queries) - 1) < 1e-9):
        raise DomainError("split query on the sampling contour")
    fsamples = np.asarray(fsamples, dtype=complex)
    q_nodes = spec.num_nodes
    coeffs = np.fft.fft(fsamples) / q_nodes
    # node z_j = e^{i(2 pi j / Q + phase)}: demodulate the phase per frequency
    t = np.arange(q_nodes)
    t_signed = np.where(t < q_nodes // 2, t, t - q_nodes)
    coeffs = coeffs * np.exp(-1j * spec.phase * t_signed)
    # drop aliasing-noise coefficients: they blow up when a half-series is
    # continued past the contour
    coeffs[np.abs(coeffs) < 1e-14 * np.max(np.abs(coeffs))] = 0
    plus = np.zeros(queries.shape, dtype=complex)
    minus = np.zeros(queries.shape, dtype=complex)
    for tt, c in zip(t_signed, coeffs):
        if c == 0:
            continue
        if tt >= 0:
            plus += c * queries ** tt
        else:
            minus += c * queries ** float(tt)
    return plus, minus


# ---------------------------------------------------------------------------
# sum-split forcing parts and the Liouville constant
# ---------------------------------------------------------------------------

def _forcing_values(kind: str, pts: np.ndarray, kc: KernelConstants,
                    cfg: PhysicalConfig, state: SpectralState) -> np.ndarray:
    """F_inc or F_A evaluated from their closed forms."""
    m = manifold_M(pts, kc)
    l2 = eval_L2(pts, kc)
    if kind == "inc":
        return m * pts / (l2 * (1 - cfg.z_c * m) * (1 - cfg.z_s * pts))
    n = state.N
    exps = np.arange(1, n + 2)
    mp = m[..., None] ** exps
    tq = pts[..., None] ** exps
    return np.einsum("...p,...q,pq->...", mp, tq, state.s_a) / l2


def _split_forcing(kind: str, sign: str, queries: np.ndarray, kc: KernelConstants,
                   cfg: PhysicalConfig, state: SpectralState, Q: int) -> np.ndarray:
    """F^+ or F^- of the forcing parts with incident-pole bookkeeping."""
    zs = cfg.z_s
    if math.sin(cfg.theta_inc) >= 0:
        raise DomainError("forcing splits implemented for sin(theta_inc) < 0")
    queries = np.atleast_1d(np.asarray(queries, dtype=complex))
    grid = ContourSpec(Q, phase=_choose_phase(cfg, 0, Q))
    z = grid.nodes
    out = np.empty(queries.shape, dtype=complex)
    if sign == "plus":
        recips = 1 / z
        fvals = _forcing_values(kind, recips, kc, cfg, state)
        for i, zeta in enumerate(queries):
            samples = fvals / (z * (1 - zeta * z))
            if kind == "inc":
                # F_inc(1/z) = E(z)/(z - z_s): pole at z_s maps inside
                m_zs = manifold_M(zs, kc)
                e_zs = m_zs / (eval_L2(zs, kc) * (1 - cfg.z_c * m_zs))
                res = e_zs / (zs * (1 - zeta * zs))
                samples = samples - res / (z - zs)
                add = res
            else:
                add = 0
            if zeta != 0:
                w = 1 / zeta
                res_w = -_forcing_values(kind, np.array([zeta]), kc, cfg, state)[0]
                samples = samples - res_w / (z - w)
            out[i] = samples @ grid.weights + add
    else:
        fvals = _forcing_values(kind, z, kc, cfg, state)
        for i, zeta in enumerate(queries):
            samples = -fvals / (z - zeta)
            if kind == "inc":
                # F_inc has its pole at 1/z_s, classified outside: remove only
                pole = 1 / zs
                m_p = manifold_M(pole, kc)
                rho = m_p * pole / (eval_L2(pole, kc) * (1 - cfg.z_c * m_p)) * (-1 / zs)
                samples = samples - (-rho / (pole - zeta)) / (z - pole)
            out[i] = samples @ grid.weights
    return out


def liouville_check(state: SpectralState, cfg: PhysicalConfig, spec: TruncationSpec,
                    n_samples: int = 8, seed: int = 0,
                    radius_in: float = 0.9, radius_out: float = 1.1) -> dict:
    """Entire-function constancy of the split Wiener-Hopf equation.

    Evaluates the plus-side combination inside the annulus and the minus-side
    combination outside and compares both against the Liouville constant
    -F_inc^+(0) - F_A^+(0).  All pieces share the state's truncated S_A, so
    the deviation measures quadrature and bookkeeping, not truncation.
    """
    kc = cfg.kernel_constants()
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * rng.random(n_samples)
    q = _safe_node_count(cfg, spec.quad_nodes)

    def fp(kind, pts):
        return _split_forcing(kind, "plus", pts, kc, cfg, state, q)

    def fm(kind, pts):
        return _split_forcing(kind, "minus", pts, kc, cfg, state, q)

    psi = complex(-fp("inc", np.array([0j]))[0] - fp("A", np.array([0j]))[0])

    zin = radius_in * np.exp(1j * angles)
    zout = radius_out * np.exp(1j * angles)
    b2_in = np.array([_b2_plus_once(kc, cfg, state, z, q) for z in zin])
    b2_rec = np.array([_b2_plus_once(kc, cfg, state, 1 / z, q) for z in zout])

    lhs = (zin * b2_in
           - (fp("inc", zin) - fm("inc", 1 / zin) + fp("A", zin) - fm("A", 1 / zin)))
    rhs = ((1 / zout) * b2_rec
           + (fm("inc", zout) - fp("inc", 1 / zout) + fm("A", zout) - fp("A", 1 / zout)))
    dev = max(np.max(np.abs(lhs - psi)), np.max(np.abs(rhs - psi)))
    return {"psi": psi, "max_deviation": float(dev)}
