"""Scattering of a plane wave by a quarter-infinite lattice of small
sound-soft cylinders, solved through a two-variable Wiener-Hopf reduction
with nearest-neighbour coupling (QLNN), with direct and least-squares
collocation baselines, field evaluation and verification diagnostics."""

from .baselines import LscSpec, direct_foldy_solve, lsc_solve
from .config import CoeffGrid, PhysicalConfig, TruncationSpec
from .contour import ContourSpec, PoleRecord, classify_incident_poles, integrate, \
    integrate_with_pole_removal
from .diagnostics import ComparisonReport, compare, decay_profile, fit_decay_slope, \
    symmetry_defect, system_residual, truncation_sweep
from .field import FieldGrid, energy_defect, incident_field, sample_total_field, \
    scattered_field
from .kernel import KernelConstants, build_constants, eval_K, eval_L1, eval_L2, \
    manifold_M, manifold_M_over_L2, manifold_dM, monopole_constant, quadratic_inside_root
from .lattice import neighbor_set_contains
from .solver import CouplingTensor, assemble, compute_A_inc, compute_M1, compute_M2, \
    inner_integral_I1, solve
from .verification import SpectralState, appendix_c_check, b2_plus, cauchy_split, \
    functional_equation_residual, liouville_check, z_transform_A

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
