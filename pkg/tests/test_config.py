"""Configuration and coefficient-grid plumbing."""

import math

import numpy as np
import pytest

from quarterlattice import CoeffGrid, PhysicalConfig, TruncationSpec
from quarterlattice.errors import DomainError


class TestPhysicalConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            PhysicalConfig(k=-1, s=0.1, a=0.001, theta_inc=0.1)
        with pytest.raises(DomainError):
            PhysicalConfig(k=1, s=0.1, a=0.06, theta_inc=0.1)
        with pytest.raises(DomainError):
            PhysicalConfig(k=1, s=0.1, a=0.001, theta_inc=0.1, monopole="bogus")

    def test_point_model_warning(self):
        with pytest.warns(UserWarning, match="ka"):
            PhysicalConfig(k=200.0, s=0.1, a=0.001, theta_inc=0.1)

    def test_incident_poles(self):
        cfg = PhysicalConfig(k=2 * math.pi, s=0.1, a=0.001, theta_inc=-3 * math.pi / 4)
        assert cfg.z_c == pytest.approx(np.exp(-1j * cfg.ks * math.cos(cfg.theta_inc)))
        assert cfg.z_s == pytest.approx(np.exp(-1j * cfg.ks * math.sin(cfg.theta_inc)))
        assert abs(abs(cfg.z_c) - 1) < 1e-15


class TestTruncationSpec:
    def test_default_inner_truncation(self):
        assert TruncationSpec(N=10).P == 12
        assert TruncationSpec(N=24).P == 29  # ceil(1.2 * 24)

    def test_validation(self):
        with pytest.raises(DomainError):
            TruncationSpec(N=3)
        with pytest.raises(DomainError):
            TruncationSpec(N=10, P=8)
        with pytest.raises(DomainError):
            TruncationSpec(N=10, quad_nodes=99)


class TestCoeffGrid:
    def test_vectorization_order(self):
        n = 3
        grid = np.arange((n + 1) ** 2, dtype=complex).reshape(n + 1, n + 1)
        vec = CoeffGrid(grid).to_vector()
        # canonical index i = n (N+1) + m
        for m in range(n + 1):
            for nn in range(n + 1):
                assert vec[nn * (n + 1) + m] == grid[m, nn]

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        grid = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        back = CoeffGrid.from_vector(CoeffGrid(grid).to_vector())
        assert np.array_equal(back.values, grid)

    def test_validation(self):
        with pytest.raises(DomainError):
            CoeffGrid(np.ones((2, 3)))
        with pytest.raises(DomainError):
            CoeffGrid.from_vector(np.ones(7))
