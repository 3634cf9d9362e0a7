"""Physical configuration, truncation parameters and the coefficient grid."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernel import MONOPOLE_CHOICES, KernelConstants, build_constants


@dataclass(frozen=True)
class PhysicalConfig:
    """Plane wave of wavenumber k hitting a quarter lattice of spacing s.

    The scatterers are sound-soft cylinders of radius a centred at
    (m s, n s) for m, n >= 0, modelled as isotropic point sources; that
    approximation needs ka << 1.  theta_inc is the incidence angle in
    radians, monopole selects the single-scatterer constant C.
    """

    k: float
    s: float
    a: float
    theta_inc: float
    monopole: str = "hankel"

    def __post_init__(self):
        if self.k <= 0 or self.s <= 0 or self.a <= 0:
            raise DomainError("k, s and a must be positive")
        if self.a >= self.s / 2:
            raise DomainError(f"radius a = {self.a} must be below s/2 = {self.s / 2}")
        if self.monopole not in MONOPOLE_CHOICES:
            raise DomainError(f"monopole must be one of {MONOPOLE_CHOICES}")
        if self.k * self.a > 0.1:
            warnings.warn(f"ka = {self.k * self.a:.3g} > 0.1; point-scatterer model "
                          "assumes ka << 1", stacklevel=2)

    @property
    def ks(self) -> float:
        return self.k * self.s

    @property
    def ka(self) -> float:
        return self.k * self.a

    @property
    def z_c(self) -> complex:
        """Incident-wave pole e^{-i ks cos(theta_inc)}."""
        return complex(np.exp(-1j * self.ks * math.cos(self.theta_inc)))

    @property
    def z_s(self) -> complex:
        """Incident-wave pole e^{-i ks sin(theta_inc)}."""
        return complex(np.exp(-1j * self.ks * math.sin(self.theta_inc)))

    def kernel_constants(self) -> KernelConstants:
        return build_constants(self)


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation and quadrature control for the lattice solver.

    Outer coefficient indices run over [0, N]^2, inner coupling indices over
    [0, P]^2 with P = ceil(1.2 N) unless overridden.  Coupling entries whose
    largest index exceeds asymp_threshold use the single-integral asymptotic
    form.  Contour quadrature starts at quad_nodes and doubles until the
    assembled arrays change by less than quad_tol (relative), up to quad_max.
    """

    N: int
    P: int | None = None
    asymp_threshold: int = 30
    quad_nodes: int = 512
    quad_max: int = 4096
    quad_tol: float = 1e-10

    def __post_init__(self):
        if self.N < 4:
            raise DomainError("truncation N must be at least 4")
        if self.P is None:
            object.__setattr__(self, "P", math.ceil(1.2 * self.N))
        if self.P < self.N:
            raise DomainError("inner truncation P must be >= N")
        if self.quad_nodes < 64 or self.quad_nodes % 2:
            raise DomainError("quad_nodes must be even and >= 64")


@dataclass
class CoeffGrid:
    """(N+1) x (N+1) complex scattering coefficients A[m, n].

    The canonical vector layout puts m fastest: index i = n (N+1) + m.
    """

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise DomainError("coefficient grid must be square")

    @property
    def N(self) -> int:
        return self.values.shape[0] - 1

    def to_vector(self) -> np.ndarray:
        return self.values.reshape(-1, order="F")

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "CoeffGrid":
        vec = np.asarray(vec, dtype=complex)
        side = math.isqrt(vec.size)
        if side * side != vec.size:
            raise DomainError("vector length is not a perfect square")
        return cls(vec.reshape(side, side, order="F"))
