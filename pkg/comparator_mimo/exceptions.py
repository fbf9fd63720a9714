class ComparatorMimoError(Exception):
    """Base exception class for comparator-mimo errors."""

    pass


class InvalidInputError(ComparatorMimoError):
    """Raised when invalid input is provided."""

    pass


class ConfigurationError(ComparatorMimoError):
    """Raised when there's a configuration problem."""

    pass


class SingularCovarianceError(ComparatorMimoError):
    """Raised when a covariance matrix cannot be factorized."""

    pass


class EstimatorFailure(SingularCovarianceError):
    """Raised when the pilot covariance of the channel estimator is singular."""

    pass


class GammaModeError(ComparatorMimoError):
    """Raised when an exhaustive symbol-matrix sum is too large to evaluate."""

    pass


class ScenarioParseError(ComparatorMimoError):
    """Raised when a scenario file cannot be parsed."""

    def __init__(self, message: str, line_number: int | None = None, key: str | None = None):
        self.line_number = line_number
        self.key = key
        location = []
        if line_number is not None:
            location.append(f"line {line_number}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class SweepFailure(ComparatorMimoError):
    """Raised when too many Monte Carlo trials had to be skipped."""

    pass
