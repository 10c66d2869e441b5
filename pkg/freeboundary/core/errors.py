class FreeBoundaryError(ValueError):
    pass


class ConvergenceError(Exception):
    """
    Mixin marking numerical non-convergence (as opposed to bad input or a
    failed check). The command line maps these to exit code 4.
    """
    pass


class NonPositiveParameter(FreeBoundaryError):
    def __init__(self, name, value=None):
        self.name = name
        super().__init__(f"validate_params: {name} = {value} must be strictly positive")


class NegativeGravity(FreeBoundaryError):
    def __init__(self, value=None):
        super().__init__(f"validate_params: gamma_a = {value} must be non-negative")


class BranchCut(FreeBoundaryError):
    pass


class SingularAtLambdaZero(FreeBoundaryError):
    pass


class ResidualTooLarge(FreeBoundaryError):
    pass


class ZeroFrequency(FreeBoundaryError):
    pass


class EmptyGrid(FreeBoundaryError):
    pass


class PreconditionViolated(FreeBoundaryError):
    pass


class ZeroOnContour(FreeBoundaryError):
    pass


class NonIntegerWinding(FreeBoundaryError, ConvergenceError):
    pass


class PoleOnContour(FreeBoundaryError):
    pass


class NonConvergedQuadrature(FreeBoundaryError, ConvergenceError):
    pass


class GridMismatch(FreeBoundaryError):
    pass


class UnknownKernel(FreeBoundaryError):
    pass


class OrderOutOfRange(FreeBoundaryError):
    pass


class TruncationNotConverged(FreeBoundaryError, ConvergenceError):
    pass


class ZeroDenominator(FreeBoundaryError):
    pass


class WindowTooSmall(FreeBoundaryError):
    pass


class ConfigError(FreeBoundaryError):
    pass


class FixedPointNotConverged(FreeBoundaryError, ConvergenceError):
    pass
