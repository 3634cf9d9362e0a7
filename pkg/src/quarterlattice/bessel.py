"""Bessel and Hankel functions of order zero for positive real argument.

Two evaluation paths are provided:

* scalar functions (``bessel_j0``, ``bessel_y0``, ``hankel1_0``) evaluate the
  ascending series in exact rational arithmetic below the series/asymptotic
  switch point, so they are correctly rounded there, and use the large-argument
  Hankel expansion above it;
* array functions (``bessel_j0_array`` et al.) use the same split in plain
  float64 for bulk evaluation (matrix assembly, field sampling), trading a few
  digits near the switch point for speed.

Order one is implemented privately; it only backs the Wronskian self-test.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.5772156649015328606065120900824024

# Below SWITCH_X the ascending series is used, above it the Hankel asymptotic
# expansion.  12 roughly equalizes the float64 series cancellation error and
# the optimally-truncated asymptotic error; the exact-rational scalar series
# keeps the scalar path correctly rounded on its side of the switch.
SWITCH_X = 12.0

_SERIES_CUTOFF = Fraction(1, 10**25)
_ASYMP_MAX_TERMS = 40


# ---------------------------------------------------------------------------
# scalar path: exact-rational ascending series
# ---------------------------------------------------------------------------

def _j0_series(x: float) -> float:
    u = Fraction(x) ** 2 / 4
    term = Fraction(1)
    acc = Fraction(1)
    j = 0
    while abs(term) > _SERIES_CUTOFF:
        j += 1
        term *= -u / (j * j)
        acc += term
    return float(acc)


def _y0_series(x: float) -> float:
    # Y0 = (2/pi) [ (ln(x/2) + gamma) J0(x) + sum_{j>=1} (-1)^{j+1} H_j u^j/(j!)^2 ]
    u = Fraction(x) ** 2 / 4
    term = Fraction(1)
    harmonic = Fraction(0)
    acc = Fraction(0)
    j = 0
    while abs(term) > _SERIES_CUTOFF:
        j += 1
        harmonic += Fraction(1, j)
        term *= -u / (j * j)
        acc -= term * harmonic
    log_part = (math.log(x / 2) + EULER_GAMMA) * _j0_series(x)
    return (2 / math.pi) * (log_part + float(acc))


def _j1_series(x: float) -> float:
    u = Fraction(x) ** 2 / 4
    term = Fraction(1)
    acc = Fraction(1)
    j = 0
    while abs(term) > _SERIES_CUTOFF:
        j += 1
        term *= -u / (j * (j + 1))
        acc += term
    return float(acc) * x / 2


def _y1_series(x: float) -> float:
    # Y1 = (2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
    #      - (x/(2 pi)) sum_{j>=0} (-1)^j (H_j + H_{j+1}) u^j / (j! (j+1)!)
    u = Fraction(x) ** 2 / 4
    term = Fraction(1)
    acc = Fraction(1)  # j = 0 term: H_0 + H_1 = 1
    harmonic2 = Fraction(1)
    j = 0
    while abs(term) > _SERIES_CUTOFF:
        j += 1
        harmonic2 += Fraction(1, j) + Fraction(1, j + 1)
        term *= -u / (j * (j + 1))
        acc += term * harmonic2
    log_part = (math.log(x / 2) + EULER_GAMMA) * _j1_series(x)
    return (2 / math.pi) * log_part - 2 / (math.pi * x) - x / (2 * math.pi) * float(acc)


# ---------------------------------------------------------------------------
# scalar path: Hankel asymptotic expansion, optimally truncated
# ---------------------------------------------------------------------------

def _asymp_pq(x: float, nu: int) -> tuple[float, float]:
    """Amplitude-phase coefficients P(x), Q(x) of the large-x expansion."""
    four_nu2 = 4 * nu * nu
    terms = [1.0]
    val = 1.0
    for m in range(1, _ASYMP_MAX_TERMS):
        val *= (four_nu2 - (2 * m - 1) ** 2) / (8 * m * x)
        if abs(val) >= abs(terms[-1]):
            break  # divergent tail reached; stop at the smallest term
        terms.append(val)
    p = sum((-1) ** t * terms[2 * t] for t in range((len(terms) + 1) // 2))
    q = sum((-1) ** t * terms[2 * t + 1] for t in range(len(terms) // 2))
    return p, q


def _jy_asymp(x: float, nu: int) -> tuple[float, float]:
    p, q = _asymp_pq(x, nu)
    w = x - nu * math.pi / 2 - math.pi / 4
    amp = math.sqrt(2 / (math.pi * x))
    return amp * (p * math.cos(w) - q * math.sin(w)), amp * (p * math.sin(w) + q * math.cos(w))


# ---------------------------------------------------------------------------
# public scalar functions
# ---------------------------------------------------------------------------

def bessel_j0(x: float) -> float:
    """J0(x) for x >= 0."""
    x = float(x)
    if x < 0:
        raise DomainError(f"bessel_j0 requires x >= 0, got {x}")
    if x <= SWITCH_X:
        return _j0_series(x)
    return _jy_asymp(x, 0)[0]


def bessel_y0(x: float) -> float:
    """Y0(x) for x > 0."""
    x = float(x)
    if x <= 0:
        raise DomainError(f"bessel_y0 requires x > 0, got {x}")
    if x <= SWITCH_X:
        return _y0_series(x)
    return _jy_asymp(x, 0)[1]


def hankel1_0(x: float) -> complex:
    """First-kind Hankel function H0(x) = J0(x) + i Y0(x) for x > 0."""
    x = float(x)
    if x <= 0:
        raise DomainError(f"hankel1_0 requires x > 0, got {x}")
    if x <= SWITCH_X:
        return complex(_j0_series(x), _y0_series(x))
    j, y = _jy_asymp(x, 0)
    return complex(j, y)


def _j1(x: float) -> float:
    x = float(x)
    if x < 0:
        raise DomainError(f"_j1 requires x >= 0, got {x}")
    if x <= SWITCH_X:
        return _j1_series(x)
    return _jy_asymp(x, 1)[0]


def _y1(x: float) -> float:
    x = float(x)
    if x <= 0:
        raise DomainError(f"_y1 requires x > 0, got {x}")
    if x <= SWITCH_X:
        return _y1_series(x)
    return _jy_asymp(x, 1)[1]


# ---------------------------------------------------------------------------
# array path: float64 coefficients precomputed once
# ---------------------------------------------------------------------------

_N_SERIES = 40
_J0_COEF = np.array([float(Fraction((-1) ** j, math.factorial(j) ** 2))
                     for j in range(_N_SERIES)])
_Y0_COEF = np.array([0.0] + [float(Fraction((-1) ** (j + 1)) *
                                   sum(Fraction(1, i) for i in range(1, j + 1)) /
                                   math.factorial(j) ** 2)
                             for j in range(1, _N_SERIES)])

_N_ASYMP = 26


def _asymp_coef(nu: int) -> np.ndarray:
    four_nu2 = 4 * nu * nu
    out = [1.0]
    for m in range(1, _N_ASYMP):
        out.append(out[-1] * (four_nu2 - (2 * m - 1) ** 2) / (8.0 * m))
    return np.array(out)


_A0 = _asymp_coef(0)
_P0_COEF = np.array([(-1) ** t * _A0[2 * t] for t in range((_N_ASYMP + 1) // 2)])
_Q0_COEF = np.array([(-1) ** t * _A0[2 * t + 1] for t in range(_N_ASYMP // 2)])


def _poly(coef: np.ndarray, u: np.ndarray) -> np.ndarray:
    acc = np.full_like(u, coef[-1])
    for c in coef[-2::-1]:
        acc = acc * u + c
    return acc


def _jy0_array(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    j_out = np.empty_like(x)
    y_out = np.empty_like(x)
    lo = x <= SWITCH_X
    if np.any(lo):
        xs = x[lo]
        u = xs * xs / 4
        j_lo = _poly(_J0_COEF, u)
        s_lo = _poly(_Y0_COEF, u)
        j_out[lo] = j_lo
        with np.errstate(divide="ignore"):  # x = 0 is legal for the J0 caller
            y_out[lo] = (2 / math.pi) * ((np.log(xs / 2) + EULER_GAMMA) * j_lo + s_lo)
    hi = ~lo
    if np.any(hi):
        xh = x[hi]
        p = _eval_even(_P0_COEF, xh)
        q = _eval_odd(_Q0_COEF, xh)
        w = xh - math.pi / 4
        amp = np.sqrt(2 / (math.pi * xh))
        j_out[hi] = amp * (p * np.cos(w) - q * np.sin(w))
        y_out[hi] = amp * (p * np.sin(w) + q * np.cos(w))
    return j_out, y_out


def _eval_even(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    return _poly(coef, 1.0 / (x * x))


def _eval_odd(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    return _poly(coef, 1.0 / (x * x)) / x


def bessel_j0_array(x: np.ndarray) -> np.ndarray:
    """Vectorized J0 for x >= 0 (float64 accuracy, ~1e-11 worst case)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j0_array requires x >= 0")
    return _jy0_array(x)[0]


def bessel_y0_array(x: np.ndarray) -> np.ndarray:
    """Vectorized Y0 for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_y0_array requires x > 0")
    return _jy0_array(x)[1]


def hankel1_0_array(x: np.ndarray) -> np.ndarray:
    """Vectorized H0(x) = J0 + i Y0 for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("hankel1_0_array requires x > 0")
    j, y = _jy0_array(x)
    return j + 1j * y
