"""Exception types shared across the package."""


class QuarterLatticeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(QuarterLatticeError, ValueError):
    """Argument outside the mathematical domain of a function."""


class DegenerateKernelError(QuarterLatticeError, ValueError):
    """Kernel constants are degenerate (b1 = +/-2 makes c1 or d1 undefined)."""


class SingularInputError(QuarterLatticeError, ValueError):
    """Evaluation requested at a genuine singularity."""


class GrazingIncidenceError(QuarterLatticeError, ValueError):
    """cos(theta_inc) or sin(theta_inc) vanishes; an incident-wave pole sits
    exactly on the contour with no limiting side."""


class InconsistentResidueError(QuarterLatticeError, ValueError):
    """Supplied residue does not match the integrand near its pole."""


class QuadratureConvergenceError(QuarterLatticeError, RuntimeError):
    """Node-doubling gate failed to converge below tolerance at max nodes."""


class SingularMatrixError(QuarterLatticeError, RuntimeError):
    """Linear system is numerically singular or too ill-conditioned."""


class RankDeficiencyError(QuarterLatticeError, RuntimeError):
    """Least-squares system is rank deficient."""


class ConfigMismatchError(QuarterLatticeError, ValueError):
    """Metadata of an input file does not match the requested configuration."""
