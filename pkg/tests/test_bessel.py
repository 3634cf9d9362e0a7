"""Series-oracle and consistency tests for the order-zero Bessel functions."""

import math

import numpy as np
import pytest

from quarterlattice import bessel
from quarterlattice.errors import DomainError

GAMMA = bessel.EULER_GAMMA


def j0_maclaurin(x: float, terms: int = 40) -> float:
    """Independent ascending-series oracle for J0."""
    total, term = 1.0, 1.0
    for j in range(1, terms):
        term *= -(x * x / 4) / (j * j)
        total += term
    return total


def y0_log_series(x: float, terms: int = 40) -> float:
    """Independent logarithmic-series oracle for Y0 (small x)."""
    total, term, harmonic = 0.0, 1.0, 0.0
    for j in range(1, terms):
        harmonic += 1 / j
        term *= -(x * x / 4) / (j * j)
        total -= term * harmonic
    return 2 / math.pi * ((math.log(x / 2) + GAMMA) * j0_maclaurin(x, terms) + total)


def bisect(f, lo, hi, steps=200):
    flo = f(lo)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if f(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestJ0:
    def test_at_zero(self):
        assert bessel.bessel_j0(0.0) == 1.0

    def test_series_oracle(self):
        x = 0.2 * math.pi
        assert bessel.bessel_j0(x) == pytest.approx(j0_maclaurin(x), rel=1e-14)

    def test_first_zero(self):
        root = bisect(j0_maclaurin, 2.0, 3.0)
        assert abs(root - 2.404825557695773) < 1e-12
        assert abs(bessel.bessel_j0(root)) < 1e-12

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            bessel.bessel_j0(-1.0)


class TestY0:
    def test_series_oracle(self):
        x = 0.2 * math.pi
        assert bessel.bessel_y0(x) == pytest.approx(y0_log_series(x), rel=1e-13)

    def test_domain(self):
        for bad in (0.0, -2.0):
            with pytest.raises(DomainError):
                bessel.bessel_y0(bad)

    def test_first_zero(self):
        root = bisect(y0_log_series, 0.5, 1.5)
        assert abs(root - 0.8935769662791675) < 1e-12
        assert abs(bessel.bessel_y0(root)) < 1e-12


class TestHankel:
    def test_composition(self):
        x = 0.2 * math.pi
        v = bessel.hankel1_0(x)
        assert v == complex(bessel.bessel_j0(x), bessel.bessel_y0(x))

    def test_lattice_argument(self):
        x = 0.2 * math.pi * math.sqrt(2)
        v = bessel.hankel1_0(x)
        assert v.real == pytest.approx(j0_maclaurin(x), rel=1e-13)
        assert v.imag == pytest.approx(y0_log_series(x), rel=1e-13)

    def test_small_argument_log_singularity(self):
        v = bessel.hankel1_0(0.0063)
        assert v.real == pytest.approx(j0_maclaurin(0.0063), rel=1e-13)
        assert v.imag == pytest.approx(y0_log_series(0.0063), rel=1e-13)
        assert v.imag < -3  # log-divergent imaginary part dominates

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel.hankel1_0(0.0)


def test_wronskian_identity():
    # J0 Y0' - J0' Y0 = 2/(pi x), derivatives via -J1, -Y1
    xs = np.logspace(-3, math.log10(50), 100)
    for x in xs:
        w = (bessel.bessel_j0(x) * (-bessel._y1(x))
             - (-bessel._j1(x)) * bessel.bessel_y0(x))
        assert abs(w - 2 / (math.pi * x)) < 1e-10


def test_series_asymptotic_continuity_at_switch():
    x = bessel.SWITCH_X
    assert abs(bessel._j0_series(x) - bessel._jy_asymp(x, 0)[0]) < 1e-12
    assert abs(bessel._y0_series(x) - bessel._jy_asymp(x, 0)[1]) < 1e-12


class TestArrayPath:
    def test_matches_scalar(self):
        xs = np.concatenate([np.logspace(-3, 1.07, 60), np.linspace(12.5, 80, 40)])
        hv = bessel.hankel1_0_array(xs)
        ref = np.array([bessel.hankel1_0(x) for x in xs])
        assert np.max(np.abs(hv - ref)) < 5e-12

    def test_j0_array_zero_ok(self):
        assert bessel.bessel_j0_array(np.array([0.0, 1.0]))[0] == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel.bessel_y0_array(np.array([1.0, 0.0]))
        with pytest.raises(DomainError):
            bessel.hankel1_0_array(np.array([-1.0]))
