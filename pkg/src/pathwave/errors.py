"""Exception hierarchy shared across the package."""


class PathwaveError(Exception):
    """Base class for all package-specific errors."""


class NonPositiveSpeed(PathwaveError):
    """Raised when a medium has c(x) <= 0 somewhere."""


class NonPositiveDepth(PathwaveError):
    """Raised by the shallow-water constructor when h(x) <= 0."""


class DiscontinuityPoint(PathwaveError):
    """Raised when the reflectivity is requested exactly at a declared jump."""


class OrderTooDeep(PathwaveError):
    """Raised when a series term beyond the configured maximum order is requested."""


class ToleranceNotMet(PathwaveError):
    """Raised when the quadrature error estimate exceeds the requested tolerance."""


class ParityMismatch(PathwaveError):
    """Raised when a term order has the wrong parity for its kind."""


class TooLarge(PathwaveError):
    """Raised when a brute-force enumeration is requested beyond its size cap."""


class OutOfDisk(PathwaveError):
    """Raised when a series argument lies outside the disk of convergence."""


class HypothesisViolated(PathwaveError):
    """Raised when a bound's hypotheses (monotonicity, impedance ratio range) fail."""


class CFLViolation(PathwaveError):
    """Raised when the finite-volume time step would violate the CFL condition."""


class UnresolvedDelta(PathwaveError):
    """Raised when a delta-approximating pulse is too narrow for the grid."""


class UnsupportedTopology(PathwaveError):
    """Raised for medium topologies outside the supported scope (e.g. two jumps)."""


class ConfigError(PathwaveError):
    """Raised when a scenario configuration is missing or malformed."""


class ComputeError(PathwaveError):
    """Raised when a scenario computation fails; wraps the originating module error."""
