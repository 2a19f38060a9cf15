"""Exception hierarchy for the thedra package.

Every error raised on invalid geometry or data derives from ThedraError so
callers (CLI, HTTP service) can convert them uniformly.  Errors that point at
a specific strip/row/field carry that location as an attribute.
"""


class ThedraError(Exception):
    """Base class for all thedra errors."""


# ---------------------------------------------------------------------------
# design data / ground view
# ---------------------------------------------------------------------------

class AngleOutOfRange(ThedraError):
    """A sector angle eta_i or theta_i leaves the open interval (-pi/2, pi/2)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ZeroLength(ThedraError):
    """A required nonzero signed length (g_i0) is zero."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateHeights(ThedraError):
    """Two consecutive heights coincide, collapsing a trajectory slab."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class SignConsistency(ThedraError):
    """Signed lengths along a profile strip mix signs (self-crossing strip)."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CollinearPolygon(ThedraError):
    """A generating polygon is contained in a line."""


class OffLine(ThedraError):
    """A ground-view point deviates from its profile line beyond tolerance."""


class NonHorizontalRows(ThedraError):
    """A trajectory row of a surface is not at constant height."""


class CollinearProfile(ThedraError):
    """A lifted profile polygon is contained in a line."""


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

class ParallelGenerators(ThedraError):
    """An edge of one generator polygon is parallel to an edge of the other."""


class NotMolding(ThedraError):
    """Design does not satisfy the isosceles (theta == eta) condition."""


class AxisDegenerate(ThedraError):
    """Axial construction with zero distance from the axis."""


class ZeroRadius(ThedraError):
    """A radius value of a surface of revolution is zero."""


class NotATHedron(ThedraError):
    """The given grid violates the basic trapezoidal-surface structure."""


# ---------------------------------------------------------------------------
# kinematics
# ---------------------------------------------------------------------------

class OutOfRange(ThedraError):
    """Deformation parameter outside the admissible interval.

    ``reason`` is one of the blocking-reason strings ("ProfileFlattening",
    "TrajectoryFlattening") and ``index`` the strip/row that blocks.
    """

    def __init__(self, message, reason=None, index=None):
        super().__init__(message)
        self.reason = reason
        self.index = index


class ConsecutiveParallelPlanes(ThedraError):
    """Two consecutive profile planes are parallel; no common axis exists."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ShapeMismatch(ThedraError):
    """Two grids that should be combinatorially equal are not."""


# ---------------------------------------------------------------------------
# metrology
# ---------------------------------------------------------------------------

class DegenerateFace(ThedraError):
    """A face has (numerically) zero area where a normal is required."""

    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


# ---------------------------------------------------------------------------
# smooth surfaces
# ---------------------------------------------------------------------------

class OutOfDomain(ThedraError):
    """Parameter value outside the function or surface domain."""


class RadicandNegative(ThedraError):
    """A deformation radicand is negative somewhere in the domain."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class OneSidedOnly(RadicandNegative):
    """The requested parameter sign is forbidden: a derivative zero makes the
    deformation one-sided."""


class CompatibilityDrift(ThedraError):
    """A deformed surface violates the profile-direction compatibility
    condition beyond tolerance."""


class NonParallelInput(ThedraError):
    """Replacement trajectory data is not parallel to the original."""


# ---------------------------------------------------------------------------
# workbench
# ---------------------------------------------------------------------------

class SchemaViolation(ThedraError):
    """A document does not match the expected JSON structure."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class InvariantViolation(ThedraError):
    """A structurally valid document carries values violating an invariant."""

    def __init__(self, message, path=None, violations=None):
        super().__init__(message)
        self.path = path
        self.violations = violations or ([(path, message)] if path else [])


class IoError(ThedraError):
    """Filesystem problem while reading or writing artifacts."""
