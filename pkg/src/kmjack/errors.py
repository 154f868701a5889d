"""Exception hierarchy shared by the library and the command line."""


class KmJackError(Exception):
    """Base class for every error raised by kmjack."""


class SampleSizeError(KmJackError, ValueError):
    """A sample is too small for the requested computation."""


class DomainError(KmJackError, ValueError):
    """An input lies outside the domain of the operation."""


class EvaluationError(KmJackError, ArithmeticError):
    """An integrand returned NaN at a point carrying positive weight."""


class CaseError(KmJackError, ValueError):
    """An estimator was requested for a censoring pattern it does not cover."""


class NotApplicableError(CaseError):
    """An imputation was requested for a sample whose largest datum is an event."""


class ConfigurationError(KmJackError, ValueError):
    """Inconsistent or incomplete configuration."""


class DatasetFormatError(ConfigurationError):
    """A dataset file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(KmJackError, ArithmeticError):
    """Base class for numerical failures (exit code 3 on the command line)."""


class InsufficientDataError(NumericalError):
    """Too few uncensored observations for the requested imputation."""


class RankError(NumericalError):
    """The weighted AFT fit is singular or too ill-posed to impute from."""


class ResamplingError(NumericalError):
    """Too many bootstrap resamples could not be fitted."""


class CalibrationError(NumericalError):
    """A censoring target could not be attained."""


class InfeasibleConstraintError(NumericalError):
    """Rejection sampling cannot satisfy a dataset constraint in reasonable time."""
