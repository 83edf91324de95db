"""Exception types shared across the package."""


class ThetaFrobError(Exception):
    """Base class for all package errors."""


class NonUnitLeading(ThetaFrobError, ArithmeticError):
    """Raised when inverting a series whose leading coefficient is not +1 or -1."""


class ZeroFactor(ThetaFrobError, ValueError):
    """Raised when a Pochhammer product would contain the factor (1 - 1)."""


class DomainError(ThetaFrobError, ValueError):
    """Raised when an argument lies outside the supported domain of a builder."""


class GridMismatch(ThetaFrobError, ValueError):
    """Raised when a theta component index and residue live on different grids."""


class LatticeError(ThetaFrobError, AssertionError):
    """Raised when a fractional q-exponent survives where only integers may."""


class CapExceeded(ThetaFrobError, RuntimeError):
    """Raised when an exhaustive enumeration would exceed its configured cap."""


class VerificationFailure(ThetaFrobError, AssertionError):
    """Raised when an identity check finds a differing coefficient.

    The failing report is kept on ``self.report``.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())
