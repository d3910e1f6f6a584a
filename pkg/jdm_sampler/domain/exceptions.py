"""Custom exceptions for the JDM sampler."""


class JdmSamplerError(Exception):
    """Base exception for JDM sampler errors."""
    pass


class InvalidInputError(JdmSamplerError):
    """Exception raised when an input matrix, sequence or file is malformed."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class ConfigurationError(JdmSamplerError):
    """Exception raised when configuration is invalid."""
    pass


class NonIntegerClassSize(JdmSamplerError):
    """Exception raised when a degree class size is not an integer."""

    def __init__(self, alpha: int) -> None:
        self.alpha = alpha
        super().__init__(f"class size of degree {alpha} is not an integer")


class NotGraphical(JdmSamplerError):
    """Exception raised when a sampler is given a non-graphical input."""
    pass


class InfeasibleBalance(JdmSamplerError):
    """Exception raised when a triplet admits no balanced completion."""
    pass


class NoFeasibleValue(JdmSamplerError):
    """Exception raised when a spectra cell has no feasible value."""
    pass


class EmptyRange(JdmSamplerError):
    """Exception raised when the combined spectra range is empty."""
    pass


class InconsistentSpectra(JdmSamplerError):
    """Exception raised when a spectra matrix does not match its JDM."""
    pass


class EmptySeries(JdmSamplerError):
    """Exception raised when an estimator receives no samples."""
    pass


class MaxLenExceeded(JdmSamplerError):
    """Exception raised when a cycle length bound is out of range."""
    pass


class TooLarge(JdmSamplerError):
    """Exception raised when an instance exceeds the enumeration guard."""
    pass
