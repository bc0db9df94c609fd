"""Exception hierarchy shared by all scagen modules."""


class ScagenError(Exception):
    """Base class for errors raised by scagen."""


class InvalidInputError(ScagenError, ValueError):
    """Input data is malformed (non-finite coordinates, wrong shape, ...)."""


class InsufficientPointsError(InvalidInputError):
    """Too few points for the requested computation."""

    def __init__(self, n, minimum, what="this operation"):
        self.n = n
        self.minimum = minimum
        super().__init__(f"{what} needs at least {minimum} points, got {n}")


class InvalidParameterError(ScagenError, ValueError):
    """A configuration or hyperparameter is outside its valid range."""


class ObjectiveError(ScagenError, RuntimeError):
    """The objective function returned a non-finite value."""

    def __init__(self, x, value):
        self.x = x
        self.value = value
        super().__init__(f"objective returned {value!r} at x={list(map(float, x))!r}")


class PointsFormatError(InvalidInputError):
    """A point file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
