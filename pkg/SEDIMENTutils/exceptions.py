"""Custom exception hierarchy for SEDIMENT utilities."""


class SedimentError(Exception):
    """Base exception for all SEDIMENT errors."""


class ValidationError(SedimentError):
    """Raised when parameter validation fails."""


class ConfigError(ValidationError):
    """Raised when a configuration file cannot be loaded or validated."""


class InfeasibleConfig(ValidationError):
    """Raised when a requested particle configuration cannot be generated."""


class TemplateError(SedimentError):
    """Raised when template rendering fails."""


class ReportIOError(SedimentError):
    """Raised when reading or writing an artifact fails."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path


# ---------------------------------------------------------------------------
# Kernel evaluation
# ---------------------------------------------------------------------------
class KernelError(SedimentError):
    """Base class for closed-form kernel evaluation failures."""


class ZeroSeparation(KernelError):
    """Raised when a singular kernel is evaluated at (numerically) zero separation."""


class InsideSphere(KernelError):
    """Raised when an exterior field is evaluated strictly inside its sphere."""


class QuadratureFailure(KernelError):
    """Raised when a field cannot be evaluated at a surface quadrature node."""


# ---------------------------------------------------------------------------
# Physics guards (CLI exit code 2)
# ---------------------------------------------------------------------------
class PhysicsGuardError(SedimentError):
    """Base class for guards that stop a simulation outside its valid regime.

    ``partial`` holds whatever was recorded before the guard fired
    (a ``SimulationTrace`` for micro runs), or ``None``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ReflectionsDiverged(PhysicsGuardError):
    """Raised when the method of reflections is outside its contraction regime."""


class MaxIterations(PhysicsGuardError):
    """Raised in strict mode when the reflection iteration hits k_max."""


class CollisionImminent(PhysicsGuardError):
    """Raised when a tentative time step brings two particles closer than 3R."""


# ---------------------------------------------------------------------------
# Mesoscale / macroscale
# ---------------------------------------------------------------------------
class DegenerateDelta(ValidationError):
    """Raised when the cube edge is not larger than a particle diameter."""


class IncompatibleGrids(SedimentError):
    """Raised when two cube grids are not nested."""


class SkewTooLarge(SedimentError):
    """Raised when snapshot times cannot be matched within the allowed skew."""


class EmptyDensity(ValidationError):
    """Raised when an initial density yields no markers above the mass floor."""
