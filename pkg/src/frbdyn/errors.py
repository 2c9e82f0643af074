"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`FrbDynError`, so callers (the CLI in particular) can separate
numerical failures from programming mistakes.
"""


class FrbDynError(Exception):
    """Base class for library errors."""


class DomainError(FrbDynError, ValueError):
    """An argument lies outside the region where a function is defined."""


class NoMonetaryEquilibriumError(DomainError):
    """Buyer liquidity at or below the lower bound where money cannot be valued."""


class ConvergenceError(FrbDynError, ArithmeticError):
    """A root finder stopped with a residual above tolerance."""


class NoSteadyStateError(FrbDynError):
    """The policy lies outside the existence region of a stationary equilibrium."""


class SingularSlopeError(FrbDynError, ArithmeticError):
    """The closed-form slope has a vanishing denominator."""


class UndefinedThresholdError(FrbDynError, ValueError):
    """A cycle threshold is undefined (zero interest rate)."""


class NoCycleError(FrbDynError):
    """A periodic orbit of the requested kind does not exist."""


class OrbitVerificationError(NoCycleError):
    """The constructed orbit does not close under the equilibrium map."""


class NoSunspotError(FrbDynError):
    """The sufficient ordering for a two-state sunspot equilibrium fails."""


class DegenerateInputError(FrbDynError, ValueError):
    """Inputs coincide where distinct values are required."""


class CalibrationError(FrbDynError):
    """Moment matching did not converge.

    Attributes
    ----------
    residuals : tuple of float
        Residuals at the last iterate.
    """

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = tuple(residuals)
