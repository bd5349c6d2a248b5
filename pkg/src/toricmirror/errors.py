"""Exception hierarchy.

Every domain error carries a stable ``code`` (the class name) so the CLI can
report it as structured JSON.
"""


class ToricMirrorError(Exception):
    """Base class for all domain errors raised by the toolkit."""

    @property
    def code(self):
        return type(self).__name__


# linear algebra
class SingularMatrix(ToricMirrorError):
    pass


# fans
class RaysDoNotSpan(ToricMirrorError):
    """The rays span a proper subspace; ``invariants`` still holds the cokernel."""

    def __init__(self, message, invariants=None):
        super().__init__(message)
        self.invariants = invariants


class NotSimplicial(ToricMirrorError):
    pass


class NotFullDimensional(ToricMirrorError):
    pass


class InfiniteIndex(ToricMirrorError):
    pass


class InvalidFan(ToricMirrorError):
    pass


# polytopes
class OriginNotInterior(ToricMirrorError):
    pass


class Unbounded(ToricMirrorError):
    pass


class NotReflexive(ToricMirrorError):
    pass


class DimensionMismatch(ToricMirrorError):
    pass


# polynomials
class ParseError(ToricMirrorError):
    pass


class NotSquare(ToricMirrorError):
    pass


class RepeatedMonomial(ToricMirrorError):
    pass


class SingularExponentMatrix(ToricMirrorError):
    pass


class ChargeOutOfRange(ToricMirrorError):
    pass


class NotDecomposable(ToricMirrorError):
    pass


class NonIntegralMilnor(ToricMirrorError):
    pass


class InfiniteDimensional(ToricMirrorError):
    pass


class NotNondegenerate(ToricMirrorError):
    pass


# groups and state spaces
class NotASymmetry(ToricMirrorError):
    pass


class GroupTooLarge(ToricMirrorError):
    pass


class DegenerateRestriction(ToricMirrorError):
    pass


class MirrorMismatch(ToricMirrorError):
    pass


# Hori-Vafa
class TooManyVariables(ToricMirrorError):
    pass


class NotQuasihomogeneous(ToricMirrorError):
    pass


class NotInvertible(ToricMirrorError):
    pass


class NotInvertibleCI(ToricMirrorError):
    pass


class DegenerateDegreeMatrix(ToricMirrorError):
    pass


class LogTermsPresent(ToricMirrorError):
    pass


class NotCalabiYau(ToricMirrorError):
    pass


class InconsistentConstraints(ToricMirrorError):
    pass
