"""Exception hierarchy.

Every error class carries a distinct ``exit_code`` used by the command line
front end, so scripts can tell failure kinds apart without parsing messages.
"""


class TropexError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class NegativeExponent(TropexError):
    """An exploded value with negative exponent was given a smooth part."""

    exit_code = 10


class NotPositiveReal(TropexError):
    """An ordering was requested for a value whose coefficient is not a positive real."""

    exit_code = 11


class RankDeficient(TropexError):
    """A matrix does not have the full column rank an operation requires."""

    exit_code = 12


class Unbounded(TropexError):
    """A linear functional is unbounded below on a polyhedron."""

    exit_code = 13


class NotPointed(TropexError):
    """A cone contains a line."""

    exit_code = 14


class DimTooLarge(TropexError):
    """The ambient dimension exceeds what an exact enumeration supports."""

    exit_code = 15


class EmptyInterior(TropexError):
    """A polytope that must be full dimensional is not."""

    exit_code = 16


class PointOutsidePolytope(TropexError):
    """A chart point's tropical part violates the chart polytope."""

    exit_code = 17


class UnsupportedDimension(TropexError):
    """A weighted complex has a shape the balancing check does not cover."""

    exit_code = 18


class InvalidConfiguration(TropexError):
    """A normal crossing configuration violates subset closure."""

    exit_code = 19


class NotAFan(TropexError):
    """A cone collection is not closed under faces or overlaps badly."""

    exit_code = 20


class InvalidSubdivision(TropexError):
    """A list of pieces does not subdivide its cell."""

    exit_code = 21


class IncompatibleOnSharedFace(TropexError):
    """Two cell subdivisions restrict differently to a common face."""

    exit_code = 22


class NotTransverse(TropexError):
    """The linear parts of two maps do not span the target."""

    exit_code = 23


class NotConvexLift(TropexError):
    """A lifting function lies above the lower hull at some point."""

    exit_code = 24


class NotUnimodular(TropexError):
    """A lower face of a lift is not a unimodular simplex."""

    exit_code = 25


class MissingLatticePoint(TropexError):
    """An exponent set omits a lattice point of its convex hull."""

    exit_code = 26


class NotAStratum(TropexError):
    """A stratum identifier does not name a stratum of the chart polytope."""

    exit_code = 27


class BadDelta(TropexError):
    """The decay exponent is outside the open interval (0, 1)."""

    exit_code = 28


class EmptyRegion(TropexError):
    """A sampling region contains no points."""

    exit_code = 29


class PolynomialSyntaxError(TropexError):
    """Text does not match the polynomial grammar.

    Attributes:
        line: 1-based line number of the offending character.
        column: 1-based column number of the offending character.
    """

    exit_code = 30

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class DuplicateExponentConflict(TropexError):
    """Two terms share an exponent vector but have different t-exponents."""

    exit_code = 31


class NotTwoDimensional(TropexError):
    """Rendering was requested for a complex outside the plane."""

    exit_code = 32


class InvalidInput(TropexError):
    """A structured input (JSON document, option value) is malformed."""

    exit_code = 33


ALL_ERRORS = (
    NegativeExponent, NotPositiveReal, RankDeficient, Unbounded, NotPointed,
    DimTooLarge, EmptyInterior, PointOutsidePolytope, UnsupportedDimension,
    InvalidConfiguration, NotAFan, InvalidSubdivision, IncompatibleOnSharedFace,
    NotTransverse, NotConvexLift, NotUnimodular, MissingLatticePoint,
    NotAStratum, BadDelta, EmptyRegion, PolynomialSyntaxError,
    DuplicateExponentConflict, NotTwoDimensional, InvalidInput,
)
