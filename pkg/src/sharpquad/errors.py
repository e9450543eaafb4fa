"""Exception types raised across the package."""


class SharpQuadError(Exception):
    """Base class for all package errors."""


class ConfigError(SharpQuadError, ValueError):
    """A pole configuration or input file failed validation."""


class PoleProximity(SharpQuadError, ValueError):
    def __init__(self, pole, point=None, message=None):
        self.pole = pole
        self.point = point
        super().__init__(message or f"evaluation point {point!r} is too close to pole {pole!r}")


class OffContour(SharpQuadError, ValueError):
    """A point expected on the reference contour is not on it."""


class NodeResidual(SharpQuadError, ArithmeticError):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"node residual {residual:.3e} exceeds tolerance")


class BranchAmbiguity(SharpQuadError, ValueError):
    """Joukowski preimage lies (numerically) on the unit circle."""


class NotAdmissible(SharpQuadError, ValueError):
    def __init__(self, admissibility, message=None):
        self.admissibility = admissibility
        text = "; ".join(str(v) for v in admissibility.violations)
        super().__init__(message or f"function is not admissible for this rule: {text}")


class PhiAtInfinityNode(SharpQuadError, ValueError):
    """On the real line phi = 0 (mod 2 pi) would place a node at infinity."""


class NonConvergence(SharpQuadError, ArithmeticError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)
