class DegeneracyError(ValueError):
    """
    Raised when clustered spectral values cannot be merged consistently or a
    spectral value falls inside a flagged dead zone.
    """

class NumericalBreakdownError(ValueError):
    """
    Raised when a floating point computation leaves the range guaranteed by the
    exact algebra (e.g. Pierce eigenvalues away from {0, 1, 2}).
    """

class ExtensionDomainError(ValueError):
    """
    Raised when a map is evaluated where its resolvent is singular or too badly
    conditioned to be trusted.
    """

class SearchExhaustedError(ValueError):
    """
    Raised when a randomized search runs out of budget without a hit.
    """

class VerificationError(ValueError):
    """
    Raised when a numerical verification rejects a construction. The offending
    sample is kept in the ``sample`` attribute.
    """

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample
