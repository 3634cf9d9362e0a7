"""Quarter-lattice nearest-neighbour (QLNN) solver.

The lattice equations are rearranged so that only the 3x3 nearest-neighbour
couplings stay on the left; a double Z-transform then yields a functional
equation whose explicit solution expresses every scattering coefficient as
contour integrals over the unit circle.  Truncating the coefficient indices
at N and the coupling indices at P turns that representation into the dense
linear system

    A = (I - coupling)^{-1} A_inc,        coupling = M1 . M2,

where M1 collects the contour integrals (independent of the incidence angle)
and M2 the free-space interactions with scatterers outside the neighbour
block.  All integrals are evaluated by the spectral trapezoid rule with the
pole-removal bookkeeping of :mod:`quarterlattice.contour`.

Grid layout: inner z-integrals run on the standard node grid, outer
zeta-integrals on a half-step offset grid, so the reciprocal points 1/zeta_i
(removed poles of the inner integrands) fall exactly between inner nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import CoeffGrid, PhysicalConfig, TruncationSpec
from .contour import ContourSpec, alias_sum, classify_incident_poles
from .errors import QuadratureConvergenceError, SingularMatrixError
from .kernel import KernelConstants, eval_L2, manifold_M
from .lattice import hankel_lattice_table, interaction_tensor, neighbor_set_contains

__all__ = [
    "CouplingTensor", "assemble", "solve", "compute_M2", "compute_M1",
    "compute_A_inc", "inner_integral_I1", "neighbor_set_contains",
]

# Geometric-sum fallback radius for (M^{n+1} - z_s^{n+1})/(M - z_s).
DD_GUARD = 1e-3

# Alias denominators |1 - (w e^{-i phase})^Q| below this trigger a node-count
# bump: a removed pole would sit on top of a quadrature node.
_COLLISION_TOL = 1e-3


@dataclass
class CouplingTensor:
    """Reshaped coupling matrix M1.M2 of shape (N+1)^2 x (N+1)^2.

    Row index i = n (N+1) + m, column index j = nbar (N+1) + mbar; the inner
    (p, q) contraction runs over [0, P]^2.
    """

    matrix: np.ndarray
    N: int
    P: int
    quad_nodes_used: int
    gate_delta: float


# ---------------------------------------------------------------------------
# grids and elementary arrays
# ---------------------------------------------------------------------------

def _safe_node_count(cfg: PhysicalConfig, Q: int) -> int:
    """Bump Q by 2 until no incident pole aliases onto either node grid."""
    specials = (cfg.z_s, 1 / cfg.z_s, cfg.z_c, 1 / cfg.z_c)
    for _ in range(64):
        ok = True
        for phase_times_q in (0.0, math.pi):  # phase * Q for the two grids
            rot = np.exp(-1j * phase_times_q)
            for w in specials:
                if abs(1 - (w ** Q) * rot) < _COLLISION_TOL:
                    ok = False
        if ok:
            return Q
        Q += 2
    raise QuadratureConvergenceError("could not find a collision-free node count")


class _Grids:
    """Manifold and kernel-factor samples on the inner and outer grids."""

    def __init__(self, kc: KernelConstants, Q: int):
        self.Q = Q
        self.inner = ContourSpec(Q)                    # z grid
        self.outer = ContourSpec(Q, phase=math.pi / Q)  # zeta grid
        self.z = self.inner.nodes
        self.t = self.outer.nodes
        self.Mz = manifold_M(self.z, kc)
        self.L2z = eval_L2(self.z, kc)
        self.Mt = manifold_M(self.t, kc)
        self.L2t = eval_L2(self.t, kc)


def _powers(base: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Stacked powers base**e for e in [lo, hi], shape (hi-lo+1, len(base))."""
    return base[None, :] ** np.arange(lo, hi + 1)[:, None]


def _cauchy_rows(t_rows: np.ndarray, z: np.ndarray, Q: int) -> np.ndarray:
    """Rows of the trapezoid Cauchy kernel z_j / (Q (1 - t_i z_j))."""
    return (z[None, :] / Q) / (1 - t_rows[:, None] * z[None, :])


def _i1_cache(g: _Grids, P: int) -> np.ndarray:
    """Inner integrals I1[(q (P+1) + p), i] at every outer node zeta_i.

    I1(p, q, zeta) = (1/2 pi i) int M(z)^{p+1} (z^{-q-1} - z^{q+1})
                     / (L2(z) (1 - zeta z)) dz
    with the pole at z = 1/zeta removed and not restored (it is classified
    outside for every zeta on the contour).  On these grids the removal
    correction is exactly r/2 because (1/zeta_i)^Q = -1.
    """
    Q, Pp1 = g.Q, P + 1
    mzp = _powers(g.Mz, 1, Pp1)                       # M^{p+1} on z grid
    zq = _powers(g.z, 1, Pp1)                         # z^{q+1}
    inv_l2z = 1 / g.L2z
    # V[(q, p) flattened, j] = g_pq(z_j); layout (q major, p minor) matches
    # the coupling column order.
    v = (mzp[None, :, :] * ((1 / zq - zq) * inv_l2z)[:, None, :])
    v = v.reshape(Pp1 * Pp1, Q)
    # residues at w_i = 1/zeta_i from the reciprocal symmetry of M and L2
    mtp = _powers(g.Mt, 1, Pp1)
    tq = _powers(g.t, 1, Pp1)
    g_recip = (mtp[None, :, :] * ((tq - 1 / tq) / g.L2t)[:, None, :]).reshape(Pp1 * Pp1, Q)
    resid = -g_recip / g.t[None, :]
    out = np.empty((Pp1 * Pp1, Q), dtype=complex)
    block = 512
    for lo in range(0, Q, block):
        rows = _cauchy_rows(g.t[lo:lo + block], g.z, Q)
        out[:, lo:lo + block] = v @ rows.T
    out -= 0.5 * resid
    return out


def _t_table(g: _Grids, amax: int, bmax: int) -> np.ndarray:
    """T[alpha, beta+1] = (1/2 pi i) int M^{alpha+1} zeta^beta / (L2 (M^2-1)) dzeta.

    Reciprocally symmetric: T(alpha, beta) = T(alpha, -beta-2), which is what
    lets |n-q|-type exponents replace signed ones exactly.
    """
    base = g.inner.weights / (g.L2z * (g.Mz ** 2 - 1))
    ma = _powers(g.Mz, 1, amax + 1)
    zb = _powers(g.z, -1, bmax)
    return ma @ (zb * base[None, :]).T


def _w_rows(g: _Grids, N: int) -> np.ndarray:
    """W[(n (N+1) + m), i] = M^{m+2} (t^{-n-1} - t^{n+1}) / (M^2 - 1) at outer nodes."""
    Np1 = N + 1
    mm = _powers(g.Mt, 2, Np1 + 1)                    # M^{m+2}
    tn = _powers(g.t, 1, Np1)                         # t^{n+1}
    w = (mm[None, :, :] * (1 / tn - tn)[:, None, :]) / (g.Mt ** 2 - 1)[None, None, :]
    return w.reshape(Np1 * Np1, g.Q)


def _w_at(point: complex, kc: KernelConstants, N: int) -> np.ndarray:
    """Same W factor evaluated at a single point, flattened (n major)."""
    m = manifold_M(point, kc)
    e = np.arange(1, N + 2)
    col = m ** (e + 1) / (m * m - 1)                  # M^{m+2}
    row = point ** (-e.astype(float)) - point ** e
    return (row[:, None] * col[None, :]).reshape(-1)


# ---------------------------------------------------------------------------
# incident vector
# ---------------------------------------------------------------------------

def _divided_difference(mvals: np.ndarray, zs: complex, N: int) -> np.ndarray:
    """dd[n, j] = (M_j^{n+1} - zs^{n+1}) / (M_j - zs), geometric form under DD_GUARD."""
    e = np.arange(1, N + 2)
    quotient_ok = np.abs(mvals - zs) >= DD_GUARD
    with np.errstate(divide="ignore", invalid="ignore"):
        quot = (mvals[None, :] ** e[:, None] - zs ** e[:, None]) / (mvals - zs)[None, :]
    geo = np.empty((N + 1, mvals.size), dtype=complex)
    acc = np.ones_like(mvals)
    geo[0] = acc
    for n in range(1, N + 1):
        acc = mvals * acc + zs ** n
        geo[n] = acc
    return np.where(quotient_ok[None, :], quot, geo)


def _incident_sides(cfg: PhysicalConfig) -> tuple[bool, bool]:
    """(z_s inside?, 1/z_c inside?) from the vanishing-absorption rule."""
    records = classify_incident_poles(cfg)
    return records[2].side == "inside", records[1].side == "inside"


def _a_inc_arrays(kc: KernelConstants, cfg: PhysicalConfig, g: _Grids, N: int) -> np.ndarray:
    """Incident part A_inc[m, n]: double contour integral plus single integral."""
    zs, zc = cfg.z_s, cfg.z_c
    zs_inside, invzc_inside = _incident_sides(cfg)
    Q = g.Q

    e_z = g.Mz / (g.L2z * (1 - zc * g.Mz))
    d_z = 1 / (g.z - zs) - g.z / (1 - zs * g.z)
    e_t = g.Mt / (g.L2t * (1 - zc * g.Mt))
    d_t = 1 / (g.t - zs) - g.t / (1 - zs * g.t)
    m_zs = manifold_M(zs, kc)
    e_zs = m_zs / (eval_L2(zs, kc) * (1 - zc * m_zs))

    # inner integral J(zeta_i) with poles z_s, 1/z_s, 1/zeta_i removed
    r_s = e_zs / (1 - g.t * zs)
    r_sig = e_zs / (zs * (zs - g.t))
    r_w = e_t * d_t / g.t            # residue at 1/zeta_i by reciprocal symmetry
    raw = _cauchy_rows(g.t, g.z, Q) @ (e_z * d_z)
    j_vals = (raw
              - r_s * alias_sum(zs, g.inner)
              - r_sig * alias_sum(1 / zs, g.inner)
              - 0.5 * r_w)
    if zs_inside:
        j_vals += r_s
    else:
        j_vals += r_sig

    # outer integral: J carries a simple pole at zeta* (outside; removed only)
    zeta_star = 1 / zs if zs_inside else zs
    w_rows = _w_rows(g, N)
    rho = _w_at(zeta_star, kc, N) * (-e_zs / zs)
    double_part = (w_rows @ (j_vals * g.outer.weights)
                   - rho * alias_sum(zeta_star, g.outer))

    # single integral over z with the pole at 1/z_c removed; the z^{-m-1}
    # factor combines with the z dz weight to z^{-m}/Q
    dd = _divided_difference(g.Mz, zs, N)
    u_n = g.Mz[None, :] * dd / (g.L2z * (1 - zs * g.Mz) * (1 - zc * g.z))[None, :]
    zm = _powers(g.z, 0, N)
    single = (u_n / Q) @ (1 / zm).T                   # [n, m]

    w = 1 / zc
    m_w = manifold_M(w, kc)
    dd_w = _divided_difference(np.array([m_w]), zs, N)[:, 0]
    e_m = np.arange(N + 1)
    r_c = (m_w * w ** (-e_m.astype(float) - 1))[None, :] * dd_w[:, None] \
        / (eval_L2(w, kc) * (1 - zs * m_w)) * (-1 / zc)   # [n, m]
    single = single - r_c * alias_sum(w, g.inner)
    if invzc_inside:
        single = single + r_c

    # double_part is flattened n-major; both pieces are [n, m] here
    return (double_part.reshape(N + 1, N + 1) + single).T


# ---------------------------------------------------------------------------
# assembly with the node-doubling gate
# ---------------------------------------------------------------------------

def _m1_matrix(kc: KernelConstants, spec: TruncationSpec, g: _Grids) -> np.ndarray:
    """M1 as a 2D matrix [(n m) rows, (q p) cols], asymptotic form above threshold."""
    N, P, T = spec.N, spec.P, spec.asymp_threshold
    i1 = _i1_cache(g, P)
    w_rows = _w_rows(g, N)
    first = (w_rows * g.outer.weights[None, :]) @ i1.T

    table = _t_table(g, N + P + 2, N + P + 1)

    def tt(alpha, beta):
        return table[alpha, beta + 1]

    idx_n, idx_m = np.divmod(np.arange((N + 1) ** 2), N + 1)
    idx_q, idx_p = np.divmod(np.arange((P + 1) ** 2), P + 1)
    amp = np.abs(idx_m[:, None] - idx_p[None, :])
    npq = idx_n[:, None] + idx_q[None, :] + 1
    anq = np.abs(idx_n[:, None] - idx_q[None, :]) - 1
    second = tt(amp, npq) - tt(amp, anq)

    use_asym = np.maximum(np.maximum(idx_m[:, None], idx_n[:, None]),
                          np.maximum(idx_p[None, :], idx_q[None, :])) > T
    if np.any(use_asym):
        asym_first = tt(idx_m[:, None] + idx_p[None, :] + 2, anq) \
            - tt(idx_m[:, None] + idx_p[None, :] + 2, npq)
        first = np.where(use_asym, asym_first, first)
    return first + second


def _m2_matrix(cfg: PhysicalConfig, N: int, P: int) -> np.ndarray:
    """M2 as a 2D matrix [(q p) rows, (nbar mbar) cols]: distant interactions."""
    tensor = interaction_tensor(cfg, P, N, exclude="neighbors")
    return tensor.transpose(1, 0, 3, 2).reshape((P + 1) ** 2, (N + 1) ** 2)


def _relative_change(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def _gated(producer, cfg: PhysicalConfig, spec: TruncationSpec):
    """Run producer(Q) at doubling node counts until the result stabilizes."""
    q = _safe_node_count(cfg, max(spec.quad_nodes // 2, 64))
    prev = producer(q)
    while True:
        q_next = _safe_node_count(cfg, 2 * q)
        cur = producer(q_next)
        delta = _relative_change(prev, cur)
        if delta < spec.quad_tol:
            return cur, q_next, delta
        if 2 * q_next > spec.quad_max:
            raise QuadratureConvergenceError(
                f"node doubling stalled at Q = {q_next} with relative change {delta:.3e}")
        prev, q = cur, q_next


@lru_cache(maxsize=8)
def _coupling_cached(k: float, s: float, a: float, monopole: str,
                     spec: TruncationSpec) -> CouplingTensor:
    # The coupling matrix does not involve the incidence angle; the dummy
    # angle below only parametrizes the alias-collision guard, which checks
    # incident poles that never enter M1.  M2 uses only the lattice table.
    cfg = PhysicalConfig(k=k, s=s, a=a, theta_inc=-3 * math.pi / 4, monopole=monopole)
    kc = cfg.kernel_constants()

    def produce(q):
        return _m1_matrix(kc, spec, _Grids(kc, q))

    m1, q_used, delta = _gated(produce, cfg, spec)
    matrix = m1 @ _m2_matrix(cfg, spec.N, spec.P)
    return CouplingTensor(matrix=matrix, N=spec.N, P=spec.P,
                          quad_nodes_used=q_used, gate_delta=delta)


@lru_cache(maxsize=16)
def _a_inc_cached(cfg: PhysicalConfig, spec: TruncationSpec) -> np.ndarray:
    kc = cfg.kernel_constants()

    def produce(q):
        return _a_inc_arrays(kc, cfg, _Grids(kc, q), spec.N)

    grid, _, _ = _gated(produce, cfg, spec)
    grid.setflags(write=False)
    return grid


def assemble(cfg: PhysicalConfig, spec: TruncationSpec) -> tuple[CouplingTensor, np.ndarray]:
    """Coupling matrix and incident vector of the truncated linear system.

    The coupling part is cached per (k, s, a, monopole, truncation): solving
    several incidence angles reuses it and only recomputes the incident
    vector.  Inner integrals are evaluated once per (p, q) on the shared
    outer grid and reused across all (m, n).
    """
    coupling = _coupling_cached(cfg.k, cfg.s, cfg.a, cfg.monopole, spec)
    a_inc = _a_inc_cached(cfg, spec)
    return coupling, CoeffGrid(np.array(a_inc)).to_vector()


def solve(cfg: PhysicalConfig, spec: TruncationSpec) -> CoeffGrid:
    """Scattering coefficients A = (I - coupling)^{-1} A_inc as a CoeffGrid."""
    coupling, b = assemble(cfg, spec)
    system = np.eye(coupling.matrix.shape[0]) - coupling.matrix
    cond = np.linalg.cond(system, 1)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMatrixError(f"system 1-norm condition {cond:.3e} exceeds 1e12")
    x = np.linalg.solve(system, b)
    resid = np.max(np.abs(system @ x - b)) / max(np.max(np.abs(b)), 1e-300)
    if resid > 1e-10:
        x += np.linalg.solve(system, b - system @ x)
    return CoeffGrid.from_vector(x)


# ---------------------------------------------------------------------------
# single-entry operations (shared machinery, per-entry gates)
# ---------------------------------------------------------------------------

def compute_M2(p: int, q: int, mbar: int, nbar: int, cfg: PhysicalConfig) -> complex:
    """Distant-interaction factor: 0 inside the neighbour block, else
    H0(ks sqrt((p-mbar)^2 + (q-nbar)^2))."""
    if neighbor_set_contains(p, q, mbar, nbar):
        return 0j
    table = hankel_lattice_table(cfg, max(abs(p - mbar), abs(q - nbar)))
    return complex(table[abs(p - mbar), abs(q - nbar)])


def _i1_single(kc: KernelConstants, p: int, q: int, zeta: complex, Q: int) -> complex:
    zeta = complex(zeta)
    phase = 0.0
    if zeta != 0:
        # rotate the grid when the removed pole 1/zeta falls on a node
        frac = (-math.atan2(zeta.imag, zeta.real) * Q / (2 * math.pi)) % 1.0
        if min(frac, 1 - frac) < 0.25:
            phase = math.pi / Q
    grid = ContourSpec(Q, phase=phase)
    z, mz, l2z = grid.nodes, manifold_M(grid.nodes, kc), eval_L2(grid.nodes, kc)
    gvals = mz ** (p + 1) * (z ** (-q - 1.0) - z ** (q + 1)) / l2z
    if zeta == 0:
        return complex(gvals @ grid.weights)
    w = 1 / zeta
    m_w, l2_w = manifold_M(w, kc), eval_L2(w, kc)
    res = -(m_w ** (p + 1) * (w ** (-q - 1.0) - w ** (q + 1)) / l2_w) / zeta
    samples = gvals / (1 - zeta * z) - res / (z - w)
    return complex(samples @ grid.weights)


def _entry_gate(producer, cfg: PhysicalConfig, spec: TruncationSpec) -> complex:
    q = _safe_node_count(cfg, max(spec.quad_nodes // 2, 64))
    prev = producer(q)
    while True:
        q_next = _safe_node_count(cfg, 2 * q)
        cur = producer(q_next)
        if abs(cur - prev) <= spec.quad_tol * max(abs(cur), 1e-300):
            return cur
        if 2 * q_next > spec.quad_max:
            raise QuadratureConvergenceError(
                f"entry quadrature stalled at Q = {q_next}")
        prev, q = cur, q_next


def inner_integral_I1(p: int, q: int, zeta: complex, cfg: PhysicalConfig,
                      spec: TruncationSpec) -> complex:
    """Inner coupling integral at a single zeta.

    The pole at z = 1/zeta is always classified outside (removed, residue
    not restored), which for |zeta| > 1 is the analytic continuation from
    inside the disk; the z^{-q-1} pole at the origin is captured exactly by
    the trapezoid rule's Laurent exactness.
    """
    kc = cfg.kernel_constants()
    return _entry_gate(lambda n: _i1_single(kc, p, q, zeta, n), cfg, spec)


def _m1_entry_arrays(kc: KernelConstants, m: int, n: int, p: int, q: int,
                     Q: int, form: str) -> complex:
    g = _Grids(kc, Q)
    table = _t_table(g, m + p + 2, n + q + 1)

    def tt(alpha, beta):
        return table[alpha, beta + 1]

    second = tt(abs(m - p), n + q + 1) - tt(abs(m - p), abs(n - q) - 1)
    if form == "asymptotic":
        first = tt(m + p + 2, abs(n - q) - 1) - tt(m + p + 2, n + q + 1)
    else:
        gpq = g.Mz ** (p + 1) * (g.z ** (-q - 1.0) - g.z ** (q + 1)) / g.L2z
        res = -(g.Mt ** (p + 1) * (g.t ** (q + 1) - g.t ** (-q - 1.0)) / g.L2t) / g.t
        i1 = _cauchy_rows(g.t, g.z, Q) @ gpq - 0.5 * res
        w_factor = g.Mt ** (m + 2) * (g.t ** (-n - 1.0) - g.t ** (n + 1)) / (g.Mt ** 2 - 1)
        first = (w_factor * i1) @ g.outer.weights
    return complex(first + second)


def compute_M1(m: int, n: int, p: int, q: int, cfg: PhysicalConfig,
               spec: TruncationSpec, form: str = "auto") -> complex:
    """One coupling-tensor entry.

    form = "auto" follows the threshold rule (asymptotic when any index
    exceeds spec.asymp_threshold); "full" and "asymptotic" force a branch.
    """
    if form == "auto":
        form = "asymptotic" if max(m, n, p, q) > spec.asymp_threshold else "full"
    kc = cfg.kernel_constants()
    return _entry_gate(lambda nn: _m1_entry_arrays(kc, m, n, p, q, nn, form), cfg, spec)


def compute_A_inc(m: int, n: int, cfg: PhysicalConfig, spec: TruncationSpec) -> complex:
    """One entry of the incident vector (non-grazing incidence)."""
    kc = cfg.kernel_constants()

    def produce(q):
        g = _Grids(kc, q)
        return _a_inc_arrays(kc, cfg, g, max(m, n))[m, n]

    return _entry_gate(produce, cfg, spec)
