"""Exception hierarchy shared by every module."""


class ObstacleDualityError(Exception):
    """Base class for all package errors."""


class NonConvexProfile(ObstacleDualityError, ValueError):
    """A profile or its derivative violates radial convexity."""


class DomainExceeded(ObstacleDualityError, ValueError):
    """A conjugate was requested outside its effective (finite) domain."""


class MissingMinorant(ObstacleDualityError, ValueError):
    """An operation needs the superlinear minorant but none is attached."""


class SearchHorizonExceeded(ObstacleDualityError, RuntimeError):
    """No crossing with the minorant was found below the maximal radius."""


class DiscontinuityAtJoin(ObstacleDualityError, RuntimeError):
    """The linear extension does not meet the truncated profile continuously."""


class QuadratureFailure(ObstacleDualityError, RuntimeError):
    """Mollified values left the sandwich bound."""


class MonotonicityViolation(ObstacleDualityError, RuntimeError):
    """A ladder level is not dominated by the next level or by the integrand."""

    def __init__(self, message, k=None, t=None):
        super().__init__(message)
        self.k = k
        self.t = t


class InfeasibleInstance(ObstacleDualityError, ValueError):
    """The admissible set is empty (obstacle above the boundary datum)."""


class MaxIterExceeded(ObstacleDualityError, RuntimeError):
    """The solver hit its iteration cap; ``result`` holds the best iterate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class SMinusViolation(ObstacleDualityError, ValueError):
    """A dual field has a negative interior divergence weight."""


class InfeasibleTrial(ObstacleDualityError, ValueError):
    """A trial field for the variational inequality is not admissible."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TMaxTooSmall(ObstacleDualityError, ValueError):
    """The brute-force conjugate maximiser sits on the upper grid edge."""


class HeightOutOfRange(ObstacleDualityError, ValueError):
    """Obstacle height for the analytic membrane must lie in (0, 1)."""


class ConfigError(ObstacleDualityError, ValueError):
    """Invalid run configuration; ``line`` points into the config file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
