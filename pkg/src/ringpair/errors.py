"""Exception hierarchy shared across the package.

Validation of plain preconditions (negative lengths, frequencies out of
range) raises ValueError; the classes below mark failure modes that
callers are expected to branch on.
"""


class RingpairError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(RingpairError):
    """Run configuration is missing, malformed, or inconsistent."""


class NumericError(RingpairError):
    """A numerical routine failed to reach its accuracy target."""


class QuadratureError(NumericError):
    """Adaptive quadrature exhausted its subdivision budget.

    Carries the best value and error estimate reached so far.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class BracketError(NumericError):
    """Root bracket does not enclose a sign change."""


class FitError(NumericError):
    """Least-squares fit failed to converge or the data are degenerate."""


class GridResolutionError(NumericError):
    """A fixed-grid integral did not converge under refinement."""


class DegenerateStructureError(RingpairError):
    """The linear steady-state system is singular (lossless, fully
    closed resonator driven exactly on resonance)."""


class EnergyConservationError(RingpairError):
    """A pump/signal/idler resonance triple violates 2*w_P = w_S + w_I
    beyond the allowed tolerance."""
