"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(ValueError):
    """Inputs are individually valid but violate an operation's precondition."""


class ConfigError(ValueError):
    """A sweep configuration is malformed.

    ``path`` names the offending field, e.g. ``"intervals[2]"``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class EvaluationError(ArithmeticError):
    """An evaluator returned a non-finite value."""

    def __init__(self, abscissa, value):
        super().__init__(f"non-finite value {value!r} at x={abscissa!r}")
        self.abscissa = abscissa
        self.value = value


class ConvergenceError(ArithmeticError):
    """Adaptive integration hit its subdivision limit.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result
