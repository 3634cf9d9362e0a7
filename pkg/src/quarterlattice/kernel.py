"""Two-variable Wiener-Hopf kernel K(z, zeta), its factors and its manifold.

The kernel of the lattice functional equation factorizes through two
one-variable functions,

    L1(z) = C + (z + 1/z) H0(ks),
    L2(z) = H0(ks) + (z + 1/z) H0(ks sqrt(2)),
    K(z, zeta) = L1(z) + (zeta + 1/zeta) L2(z),

where C is the monopole constant of a single scatterer.  The manifold
M(z) is the inside-unit-disk root of K(z, .) = 0; it is reciprocally
symmetric (M(z) = M(1/z)) and self-inverse on the open disk.  Near the
zeros b2, 1/b2 of L2 the quotient L1/L2 blows up while M stays finite
(removable singularities), so those neighbourhoods are evaluated through
first-order expansions instead of the raw quotient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bessel import EULER_GAMMA, bessel_j0, hankel1_0
from .errors import DegenerateKernelError, DomainError, SingularInputError

MONOPOLE_CHOICES = ("hankel", "log_form", "ratio")

# Radius around b2 and 1/b2 inside which M and M/L2 switch to their
# first-order expansions; the raw quotient loses ~|z - b2|^-1 digits there.
EPS_B = 1e-5

_REAL_AXIS_TOL = 1e-13


def monopole_constant(ka: float, choice: str) -> complex:
    """Monopole constant C of a single sound-soft cylinder of size ka.

    All three choices agree to O((ka)^2 / ln ka): ``hankel`` is H0(ka),
    ``log_form`` its small-ka logarithmic limit (which conserves energy
    exactly in the monopole model), ``ratio`` is H0(ka)/J0(ka).
    """
    if choice == "hankel":
        return hankel1_0(ka)
    if choice == "log_form":
        return 1 + 2j / math.pi * (math.log(ka / 2) + EULER_GAMMA)
    if choice == "ratio":
        return hankel1_0(ka) / bessel_j0(ka)
    raise DomainError(f"unknown monopole choice {choice!r}; expected one of {MONOPOLE_CHOICES}")


@dataclass(frozen=True)
class KernelConstants:
    """Constants derived from (k, s, a) and the monopole choice.

    b2, c2, d2 are the inside-unit-disk roots of z^2 + t z + 1 = 0 for
    t = b1, c1, d1; b2 marks the removable singularity of M, c2 and d2
    its interior branch points.
    """

    monopole: complex
    h1: complex
    h2: complex
    a1: complex
    b1: complex
    b2: complex
    c1: complex
    c2: complex
    d1: complex
    d2: complex


def quadratic_inside_root(t1: complex) -> complex:
    """Root of z^2 + t1 z + 1 = 0 with modulus <= 1.

    Evaluates -t1/2 + sqrt(t1/2 - 1) sqrt(t1/2 + 1) with principal-branch
    square roots.  For t1 on the real segment [-2, 2] both roots lie on the
    unit circle and the principal branch picks the one with Im >= 0; inputs
    within rounding noise of that segment are snapped onto it so the
    selection stays deterministic.
    """
    if isinstance(t1, np.ndarray):
        return _inside_root_array(t1)
    t1 = complex(t1)
    if abs(t1.imag) <= _REAL_AXIS_TOL * (1 + abs(t1)) and abs(t1.real) <= 2:
        re = t1.real
        return complex(-re / 2, math.sqrt(max(1 - re * re / 4, 0.0)))
    return -t1 / 2 + cmath.sqrt(t1 / 2 - 1) * cmath.sqrt(t1 / 2 + 1)


def _inside_root_array(t1: np.ndarray) -> np.ndarray:
    t1 = np.asarray(t1, dtype=complex)
    snap = (np.abs(t1.imag) <= _REAL_AXIS_TOL * (1 + np.abs(t1))) & (np.abs(t1.real) <= 2)
    t = np.where(snap, t1.real + 0j, t1)
    root = -t / 2 + np.sqrt(t / 2 - 1) * np.sqrt(t / 2 + 1)
    return root


def build_constants(cfg) -> KernelConstants:
    """Evaluate all kernel constants for a physical configuration.

    cfg only needs k, s, a and monopole attributes, so any configuration
    object (or a bare namespace) works.
    """
    k, s, a = cfg.k, cfg.s, cfg.a
    if k * s <= 0 or k * a <= 0:
        raise DomainError("build_constants requires ks > 0 and ka > 0")
    c = monopole_constant(k * a, cfg.monopole)
    h1 = hankel1_0(k * s)
    h2 = hankel1_0(k * s * math.sqrt(2))
    a1 = c / h1
    b1 = h1 / h2
    if abs(b1 - 2) < 1e-13 or abs(b1 + 2) < 1e-13:
        raise DegenerateKernelError(f"b1 = {b1} within rounding of +/-2; c1 or d1 undefined")
    c1 = b1 * (a1 - 2) / (b1 - 2)
    d1 = b1 * (a1 + 2) / (b1 + 2)
    return KernelConstants(
        monopole=c, h1=h1, h2=h2, a1=a1, b1=b1,
        b2=quadratic_inside_root(b1),
        c1=c1, c2=quadratic_inside_root(c1),
        d1=d1, d2=quadratic_inside_root(d1),
    )


def _check_nonzero(z, name: str) -> None:
    if np.any(np.asarray(z) == 0):
        raise DomainError(f"{name} is singular at 0")


def eval_L1(z, kc: KernelConstants):
    """L1(z) = C + (z + 1/z) H0(ks)."""
    _check_nonzero(z, "L1")
    return kc.monopole + (z + 1 / z) * kc.h1


def eval_L2(z, kc: KernelConstants):
    """L2(z) = H0(ks) + (z + 1/z) H0(ks sqrt(2))."""
    _check_nonzero(z, "L2")
    return kc.h1 + (z + 1 / z) * kc.h2


def eval_K(z, zeta, kc: KernelConstants):
    """K(z, zeta) = L1(z) + (zeta + 1/zeta) L2(z); symmetric in its arguments."""
    _check_nonzero(z, "K")
    _check_nonzero(zeta, "K")
    return eval_L1(z, kc) + (zeta + 1 / zeta) * eval_L2(z, kc)


def _slope_b2(kc: KernelConstants) -> complex:
    # M(z) = -(b2^2 - 1)/((a1 - b1) b1 b2^2) (z - b2) + O((z - b2)^2)
    return -(kc.b2 ** 2 - 1) / ((kc.a1 - kc.b1) * kc.b1 * kc.b2 ** 2)


def _slope_inv_b2(kc: KernelConstants) -> complex:
    # M(z) = -(1 - b2^2)/((a1 - b1) b1) (z - 1/b2) + O((z - 1/b2)^2)
    return -(1 - kc.b2 ** 2) / ((kc.a1 - kc.b1) * kc.b1)


def manifold_M(z, kc: KernelConstants):
    """Inside-unit-disk root M(z) of K(z, .) = 0.

    Within EPS_B of b2 or 1/b2 the removable-singularity expansions are
    used in place of the L1/L2 quotient.
    """
    _check_nonzero(z, "M")
    if isinstance(z, np.ndarray):
        z = np.asarray(z, dtype=complex)
        near_b = np.abs(z - kc.b2) < EPS_B
        near_ib = np.abs(z - 1 / kc.b2) < EPS_B
        safe = np.where(near_b | near_ib, 2.0 + 0j, z)  # placeholder far from b2
        out = quadratic_inside_root(eval_L1(safe, kc) / eval_L2(safe, kc))
        if np.any(near_b):
            out = np.where(near_b, _slope_b2(kc) * (z - kc.b2), out)
        if np.any(near_ib):
            out = np.where(near_ib, _slope_inv_b2(kc) * (z - 1 / kc.b2), out)
        return out
    z = complex(z)
    if abs(z - kc.b2) < EPS_B:
        return _slope_b2(kc) * (z - kc.b2)
    if abs(z - 1 / kc.b2) < EPS_B:
        return _slope_inv_b2(kc) * (z - 1 / kc.b2)
    return quadratic_inside_root(eval_L1(z, kc) / eval_L2(z, kc))


def manifold_M_over_L2(z, kc: KernelConstants):
    """M(z)/L2(z), finite across the removable singularities at b2 and 1/b2.

    L2(z) = h2 (z - b2)(z - 1/b2)/z, so the quotient tends to a finite limit
    as z -> b2 (resp. 1/b2); those limits are returned inside EPS_B.
    """
    _check_nonzero(z, "M/L2")
    lim_b = _slope_b2(kc) * kc.b2 / (kc.h2 * (kc.b2 - 1 / kc.b2))
    lim_ib = _slope_inv_b2(kc) * (1 / kc.b2) / (kc.h2 * (1 / kc.b2 - kc.b2))
    if isinstance(z, np.ndarray):
        z = np.asarray(z, dtype=complex)
        near_b = np.abs(z - kc.b2) < EPS_B
        near_ib = np.abs(z - 1 / kc.b2) < EPS_B
        safe = np.where(near_b | near_ib, 2.0 + 0j, z)
        out = manifold_M(safe, kc) / eval_L2(safe, kc)
        out = np.where(near_b, lim_b, out)
        out = np.where(near_ib, lim_ib, out)
        return out
    z = complex(z)
    if abs(z - kc.b2) < EPS_B:
        return lim_b
    if abs(z - 1 / kc.b2) < EPS_B:
        return lim_ib
    return manifold_M(z, kc) / eval_L2(z, kc)


def manifold_dM(zeta, kc: KernelConstants):
    """Derivative M'(zeta) via the closed form

        M'(zeta) = -M^2 L2(M) (zeta^2 - 1) / (zeta^2 L2(zeta) (M^2 - 1)).

    M^2 L2(M) is expanded to M (h2 M^2 + h1 M + h2) so the form stays finite
    when M itself vanishes.  Near b2 and 1/b2 the expansion slopes are
    returned directly.
    """
    _check_nonzero(zeta, "M'")
    if isinstance(zeta, np.ndarray):
        return np.array([manifold_dM(complex(t), kc) for t in zeta.ravel()]).reshape(zeta.shape)
    zeta = complex(zeta)
    if abs(zeta - kc.b2) < EPS_B:
        return _slope_b2(kc)
    if abs(zeta - 1 / kc.b2) < EPS_B:
        return _slope_inv_b2(kc)
    m = manifold_M(zeta, kc)
    # at a branch point the computed M carries O(sqrt(eps)) noise, so the
    # observable floor of |M^2 - 1| is ~1e-8, not eps
    if abs(m * m - 1) < 1e-6:
        raise SingularInputError(f"M(zeta)^2 = 1 near zeta = {zeta}; derivative unbounded")
    num = -m * (kc.h2 * m * m + kc.h1 * m + kc.h2) * (zeta * zeta - 1)
    den = zeta * zeta * eval_L2(zeta, kc) * (m * m - 1)
    return num / den
