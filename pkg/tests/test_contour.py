"""Trapezoid quadrature, pole removal and incident-pole classification."""

import math

import numpy as np
import pytest

from quarterlattice import (ContourSpec, PhysicalConfig, PoleRecord,
                            classify_incident_poles, integrate,
                            integrate_with_pole_removal)
from quarterlattice.errors import (DomainError, GrazingIncidenceError,
                                   InconsistentResidueError)


@pytest.fixture
def spec():
    return ContourSpec(256)


class TestContourSpec:
    def test_nodes_on_circle(self, spec):
        assert np.max(np.abs(np.abs(spec.nodes) - 1)) < 1e-15

    def test_validation(self):
        with pytest.raises(DomainError):
            ContourSpec(32)
        with pytest.raises(DomainError):
            ContourSpec(129)


class TestIntegrate:
    def test_simple_pole_at_origin(self, spec):
        assert integrate(1 / spec.nodes, spec) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("m", [0, 3, 17])
    def test_nonnegative_powers_vanish(self, spec, m):
        assert abs(integrate(spec.nodes ** m, spec)) < 1e-14

    def test_inside_pole_geometric_oracle(self, spec):
        # sum of the geometric series gives 1/(1 - 0.3^Q) exactly
        val = integrate(1 / (spec.nodes - 0.3), spec)
        oracle = 1 / (1 - 0.3 ** spec.num_nodes)
        assert abs(val - oracle) < 1e-14
        assert abs(val - 1) < 1e-12

    def test_shape_mismatch(self, spec):
        with pytest.raises(DomainError):
            integrate(np.ones(100), spec)

    def test_doubling_stability(self):
        # analytic in an annulus: doubling changes the value below 1e-10
        def f(z):
            return np.exp(z) / z + 1 / (z - 0.4)

        vals = [integrate(f(ContourSpec(q).nodes), ContourSpec(q)) for q in (128, 256)]
        assert abs(vals[0] - vals[1]) / abs(vals[1]) < 1e-10


class TestPoleRemoval:
    zs = complex(np.exp(0.37j))

    def test_on_contour_pole_inside(self, spec):
        val = integrate_with_pole_removal(
            lambda z: 1 / (z - self.zs), [PoleRecord(self.zs, 1.0, "inside")], spec)
        assert val == pytest.approx(1.0, abs=1e-12)

    def test_on_contour_pole_outside(self, spec):
        val = integrate_with_pole_removal(
            lambda z: 1 / (z - 1 / self.zs), [PoleRecord(1 / self.zs, 1.0, "outside")], spec)
        assert abs(val) < 1e-12

    def test_partial_fractions(self, spec):
        # 1/((z - zs)(z - 1/zs)): only the inside residue survives
        zs = self.zs * 1.0

        def f(z):
            return 1 / ((z - zs) * (z - 1 / zs))

        r_in = 1 / (zs - 1 / zs)
        poles = [PoleRecord(zs, r_in, "inside"), PoleRecord(1 / zs, -r_in, "outside")]
        val = integrate_with_pole_removal(f, poles, spec)
        assert val == pytest.approx(r_in, abs=1e-12)

    def test_rational_exactness(self):
        # all poles recorded -> result equals the sum of inside residues;
        # the fine grid keeps the residue guard's nearest-node probe valid
        fine = ContourSpec(1024)
        p_in, p_out = 0.99 * np.exp(1.1j), 1.01 * np.exp(-2.3j)
        r_in, r_out = 0.7 - 0.2j, 1.3 + 0.5j

        def f(z):
            return r_in / (z - p_in) + r_out / (z - p_out) + 0.05 * np.cos(z)

        poles = [PoleRecord(p_in, r_in, "inside"), PoleRecord(p_out, r_out, "outside")]
        val = integrate_with_pole_removal(f, poles, fine)
        assert abs(val - r_in) < 1e-12

    def test_residue_guard(self, spec):
        with pytest.raises(InconsistentResidueError):
            integrate_with_pole_removal(
                lambda z: 1 / (z - self.zs), [PoleRecord(self.zs, 2.0, "inside")], spec)

    def test_guard_can_be_disabled(self, spec):
        val = integrate_with_pole_removal(
            lambda z: 1 / (z - self.zs), [PoleRecord(self.zs, 2.0, "inside")],
            spec, verify_residues=False)
        assert np.isfinite(val.real)


class TestClassification:
    def test_third_quadrant_incidence(self):
        cfg = PhysicalConfig(k=2 * math.pi, s=0.1, a=0.001, theta_inc=-3 * math.pi / 4)
        rec = {("zc", 0), ("zc_inv", 1), ("zs", 2), ("zs_inv", 3)}
        records = classify_incident_poles(cfg)
        assert records[0].side == "inside"       # z_c, cos < 0
        assert records[1].side == "outside"
        assert records[2].side == "inside"       # z_s, sin < 0
        assert records[3].side == "outside"
        assert records[0].location == pytest.approx(cfg.z_c)
        assert records[3].location == pytest.approx(1 / cfg.z_s)

    def test_fourth_quadrant_incidence(self):
        cfg = PhysicalConfig(k=2 * math.pi, s=0.1, a=0.001, theta_inc=-math.pi / 4)
        records = classify_incident_poles(cfg)
        assert records[0].side == "outside"      # cos > 0
        assert records[2].side == "inside"       # sin < 0

    def test_grazing(self):
        cfg = PhysicalConfig(k=2 * math.pi, s=0.1, a=0.001, theta_inc=math.pi / 2)
        with pytest.raises(GrazingIncidenceError):
            classify_incident_poles(cfg)


def test_pole_record_side_validated():
    with pytest.raises(DomainError):
        PoleRecord(1j, 0j, "above")
