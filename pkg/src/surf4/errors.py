"""Exception hierarchy shared by all surf4 modules."""


class Surf4Error(Exception):
    """Base class for every error raised by the engine."""


class SpecError(Surf4Error):
    """Malformed or unsupported input specification (JSON, expressions, grids)."""


class InvalidSpec(SpecError):
    pass


class InvalidProfile(SpecError):
    pass


class DomainViolation(Surf4Error):
    """Parameter point outside the chart domain (or too close to its edge for FD)."""


class DegenerateChart(Surf4Error):
    """z_u and z_v are (numerically) linearly dependent."""


class ZeroDirection(Surf4Error):
    pass


class FlatPoint(Surf4Error):
    """L = M = N = 0 at the point; direction and conic notions degenerate."""


class UmbilicLike(Surf4Error):
    """Every tangent is principal (minimal point)."""


class NotASegment(Surf4Error):
    pass


class PoleOfProfile(Surf4Error):
    """Profile radius f(u) vanishes."""


class DegenerateCurve(Surf4Error):
    pass


class ProfileOutOfRange(Surf4Error):
    """|f'| >= 1 somewhere inside the requested domain."""


class OutsideValidity(Surf4Error):
    """ODE closed form evaluated outside its admissible region."""

    def __init__(self, message, last_valid=None):
        super().__init__(message)
        self.last_valid = last_valid


class StepTooLarge(Surf4Error):
    pass
