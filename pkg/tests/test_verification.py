"""Wiener-Hopf intermediate objects: transforms, B2+, splits, residue identities."""

import numpy as np
import pytest

from quarterlattice import (CoeffGrid, ContourSpec, TruncationSpec, appendix_c_check,
                            b2_plus, cauchy_split, direct_foldy_solve,
                            functional_equation_residual, liouville_check,
                            z_transform_A)
from quarterlattice.errors import DomainError
from quarterlattice.verification import SpectralState


@pytest.fixture(scope="module")
def state12(cfg2, direct2_cache):
    return SpectralState.from_coeffs(direct2_cache(12), cfg2)


@pytest.fixture(scope="module")
def state30(cfg2, direct2_cache):
    return SpectralState.from_coeffs(direct2_cache(30), cfg2)


class TestTransforms:
    def test_origin_gives_corner_coefficient(self, state12):
        assert z_transform_A(state12, 0j, 0j) == state12.coeffs.values[0, 0]

    def test_small_grid_full_sum(self, cfg2):
        vals = np.array([[1 + 1j, 2], [3, 4 - 2j]])
        st = SpectralState.from_coeffs(CoeffGrid(vals), cfg2)
        assert z_transform_A(st, 1 + 0j, 1 + 0j) == pytest.approx(vals.sum())

    def test_matches_double_loop(self, state12):
        rng = np.random.default_rng(2)
        for _ in range(4):
            z = 0.9 * np.exp(2j * np.pi * rng.random())
            t = 0.8 * np.exp(2j * np.pi * rng.random())
            ref = sum(state12.coeffs.values[p, q] * z ** p * t ** q
                      for p in range(13) for q in range(13))
            assert z_transform_A(state12, z, t) == pytest.approx(ref)


class TestSaTable:
    def test_excludes_neighbours(self, cfg2, state12):
        from quarterlattice.lattice import hankel_lattice_table
        table = hankel_lattice_table(cfg2, 12)
        p, q = 2, 3
        ref = 0
        for m in range(13):
            for n in range(13):
                if abs(p - m) <= 1 and abs(q - n) <= 1:
                    continue
                ref += state12.coeffs.values[m, n] * table[abs(p - m), abs(q - n)]
        assert state12.s_a[p, q] == pytest.approx(ref)


class TestFunctionalEquation:
    def test_zero_state_reduces_to_incident_forcing(self, cfg2):
        st = SpectralState.from_coeffs(CoeffGrid(np.zeros((5, 5), complex)), cfg2)
        z, t = np.exp(0.3j), np.exp(-1.1j)
        res = functional_equation_residual(st, cfg2, z, t)
        expected = z * t / ((1 - cfg2.z_c * z) * (1 - cfg2.z_s * t))
        assert res == pytest.approx(expected)

    def test_interior_residual_decays_with_truncation(self, cfg2, direct2_cache):
        # truncated incident tails on the unit circle stay O(1); evaluated at
        # radius 0.7 they shrink like 0.7^N and the identity emerges
        rng = np.random.default_rng(7)
        angles = 2 * np.pi * rng.random(16)
        maxima = []
        for n in (20, 30, 40):
            st = SpectralState.from_coeffs(direct2_cache(n), cfg2)
            res = max(abs(functional_equation_residual(
                st, cfg2, 0.7 * np.exp(1j * u), 0.7 * np.exp(1j * v)))
                for u, v in zip(angles, angles[::-1]))
            maxima.append(res)
        assert maxima[0] > maxima[1] > maxima[2]
        assert maxima[1] < 1e-4
        assert maxima[2] < 5e-6

    def test_pass_band_needs_higher_truncation(self, cfg2, cfg8, direct2_cache):
        rng = np.random.default_rng(7)
        angles = 2 * np.pi * rng.random(16)

        def worst(cfg, n):
            st = SpectralState.from_coeffs(direct_foldy_solve(cfg, n), cfg)
            return max(abs(functional_equation_residual(
                st, cfg, 0.7 * np.exp(1j * u), 0.7 * np.exp(1j * v)))
                for u, v in zip(angles, angles[::-1]))

        w8_20, w8_30 = worst(cfg8, 20), worst(cfg8, 30)
        st20 = SpectralState.from_coeffs(direct2_cache(20), cfg2)
        w2_20 = max(abs(functional_equation_residual(
            st20, cfg2, 0.7 * np.exp(1j * u), 0.7 * np.exp(1j * v)))
            for u, v in zip(angles, angles[::-1]))
        assert w8_20 > w2_20      # stronger interaction at the pass band
        assert w8_30 < w8_20      # still decreasing with truncation


SPEC30 = TruncationSpec(N=30)


class TestB2Plus:
    def test_value_at_origin_is_corner_coefficient(self, cfg2, state30):
        val = b2_plus(state30, cfg2, 0, SPEC30)
        assert abs(val - state30.coeffs.values[0, 0]) < 1e-9

    def test_matches_series_inside(self, cfg2, state30):
        # agreement is limited by the q-tail of the truncated forcing,
        # which scales like |zeta|^(N+1)
        rng = np.random.default_rng(3)
        for ang in 2 * np.pi * rng.random(4):
            t = 0.7 * np.exp(1j * ang)
            series = state30.coeffs.values[0, :] @ t ** np.arange(31)
            assert abs(b2_plus(state30, cfg2, t, SPEC30) - series) < 1e-4

    def test_one_variable_wiener_hopf_identity(self, cfg2, state30):
        rng = np.random.default_rng(4)
        kc = cfg2.kernel_constants()
        from quarterlattice.kernel import eval_L2, manifold_M
        zs, zc = cfg2.z_s, cfg2.z_c

        def f_inc(t):
            m = manifold_M(t, kc)
            return m * t / (eval_L2(t, kc) * (1 - zc * m) * (1 - zs * t))

        def f_a(t):
            m = manifold_M(t, kc)
            e = np.arange(1, 32)
            return (m ** e[:, None] * t ** e[None, :] * state30.s_a).sum() / eval_L2(t, kc)

        worst = 0.0
        for ang in 2 * np.pi * rng.random(6):
            t = complex(np.exp(1j * ang))
            if abs(t - 1 / zs) < 0.05 or abs(t - zs) < 0.05:
                continue
            lhs = t * b2_plus(state30, cfg2, t, SPEC30) \
                - b2_plus(state30, cfg2, 1 / t, SPEC30) / t
            rhs = f_inc(t) - f_inc(1 / t) + f_a(t) - f_a(1 / t)
            worst = max(worst, abs(lhs - rhs))
        assert worst < 1e-5

    def test_pole_location_rejected(self, cfg2, state12):
        with pytest.raises(DomainError):
            b2_plus(state12, cfg2, 1 / cfg2.z_s, TruncationSpec(N=12))


class TestResidueIdentities:
    def test_residue_identities(self, cfg2):
        spec = TruncationSpec(N=4, quad_nodes=2048)
        rng = np.random.default_rng(5)
        for z in np.exp(2j * np.pi * rng.random(4)):
            rep = appendix_c_check(complex(z), 0, 0, cfg2, spec)
            assert rep["max_deviation"] < 1e-10

    def test_equal_orders_collapse(self, cfg2, kc2):
        from quarterlattice.kernel import eval_L2, manifold_M
        spec = TruncationSpec(N=4, quad_nodes=2048)
        z = complex(np.exp(0.77j))
        rep = appendix_c_check(z, 4, 4, cfg2, spec)
        assert rep["max_deviation"] < 1e-10
        # exponent |n-q| + 1 collapses to 1
        m = manifold_M(z, kc2)
        ref = m / (eval_L2(z, kc2) * (m * m - 1))
        assert rep["deviations"]["shifted_power"] < 1e-10
        assert abs(rep["closed_forms"]["shifted_power"] - ref) < 1e-14

    def test_order_swap_symmetry(self, cfg2):
        spec = TruncationSpec(N=4, quad_nodes=2048)
        z = complex(np.exp(-1.9j))
        a = appendix_c_check(z, 3, 7, cfg2, spec)
        b = appendix_c_check(z, 7, 3, cfg2, spec)
        assert abs(a["closed_forms"]["shifted_power"]
                   - b["closed_forms"]["shifted_power"]) == 0
        assert a["max_deviation"] < 1e-10 and b["max_deviation"] < 1e-10


class TestCauchySplit:
    def test_laurent_split(self):
        grid = ContourSpec(256)
        f = grid.nodes + 1 / grid.nodes
        plus, minus = cauchy_split(f, grid, np.array([0.5 + 0.2j]))
        assert plus[0] == pytest.approx(0.5 + 0.2j)
        assert minus[0] == pytest.approx(1 / (0.5 + 0.2j))

    def test_constant_goes_to_plus_part(self):
        grid = ContourSpec(256)
        plus, minus = cauchy_split(np.full(256, 3.7 + 0j), grid, np.array([0.3 + 0j]))
        assert plus[0] == pytest.approx(3.7)
        assert abs(minus[0]) < 1e-12

    def test_rational_partial_fractions(self):
        grid = ContourSpec(512)
        z = grid.nodes
        f = 1 / (z - 0.4) + 1 / (z - 2.5)
        plus, _ = cauchy_split(f, grid, np.array([0.7j]))
        _, minus = cauchy_split(f, grid, np.array([1.8 + 0j]))
        assert plus[0] == pytest.approx(1 / (0.7j - 2.5), abs=1e-12)
        assert minus[0] == pytest.approx(1 / (1.8 - 0.4), abs=1e-10)

    def test_additivity_on_wide_annulus(self):
        grid = ContourSpec(512)
        z = grid.nodes

        def f(w):
            return np.exp(w) + 1 / (w - 3.0) + 1 / (w - 0.05)

        for radius in (1 - 1e-6, 1 + 1e-6):
            queries = radius * np.exp(1j * np.array([0.3, 1.7, 4.0]))
            plus, minus = cauchy_split(f(z), grid, queries)
            assert np.max(np.abs(plus + minus - f(queries))) < 1e-10

    def test_query_on_contour_rejected(self):
        grid = ContourSpec(256)
        with pytest.raises(DomainError):
            cauchy_split(grid.nodes, grid, np.array([np.exp(0.4j)]))


def test_liouville_constant(cfg2, state30):
    rep = liouville_check(state30, cfg2, SPEC30, n_samples=6)
    assert rep["max_deviation"] < 1e-5
