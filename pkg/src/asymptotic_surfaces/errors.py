"""Exception hierarchy.

Every error carries a ``category`` used by the command line front end to
pick an exit code: ``"input"`` (2), ``"not_applicable"`` (3) and
``"numerical"`` (4).
"""


class SurfaceError(Exception):
    category = "input"

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail


# expressions
class ExprSyntaxError(SurfaceError):
    def __init__(self, message, position=None, text=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message, position=position, text=text)
        self.position = position


class UnknownIdentifier(ExprSyntaxError):
    pass


class ArityError(ExprSyntaxError):
    pass


class ExprDomainError(SurfaceError):
    category = "numerical"


# geometry
class DegeneratePoint(SurfaceError):
    category = "numerical"


class LightLikeNormal(SurfaceError):
    category = "not_applicable"


class SingularMetric(SurfaceError):
    category = "numerical"


class FrameIncompatible(SurfaceError):
    pass


class MethodNotApplicable(SurfaceError):
    category = "not_applicable"


class NotAsymptotic(MethodNotApplicable):
    pass


class WrongSignature(MethodNotApplicable):
    pass


class DegenerateDenominator(SurfaceError):
    category = "numerical"


# canonical parameters
class CrossVariationTooLarge(SurfaceError):
    category = "numerical"


class NonPositiveGauge(SurfaceError):
    category = "numerical"


class InterpolationOutOfRange(SurfaceError):
    category = "numerical"


# reconstruction
class NonPositiveResult(SurfaceError):
    category = "numerical"


class IncompatibleInvariants(SurfaceError):
    """Input invariants violate the compatibility equations."""


class AllNodesMasked(SurfaceError):
    category = "numerical"


class GramDriftExceeded(SurfaceError):
    category = "numerical"


class ClosureExceeded(SurfaceError):
    category = "numerical"


class StageError(SurfaceError):
    """Wraps an error raised inside one stage of a pipeline."""

    def __init__(self, stage, error):
        super().__init__(f"{stage}: {error}", stage=stage, **getattr(error, "detail", {}))
        self.stage = stage
        self.error = error
        self.category = getattr(error, "category", "numerical")


# pde
class DivergenceError(SurfaceError):
    category = "numerical"


class NonPositiveK(SurfaceError):
    category = "not_applicable"


class CornerMismatch(SurfaceError):
    pass
