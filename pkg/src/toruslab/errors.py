"""Exception hierarchy.

Every failure mode that callers are expected to branch on gets its own
class; the CLI maps them to exit codes (input errors -> 2, exhausted or
internal inconsistencies -> 3).
"""


class TorusLabError(Exception):
    """Base class for all library errors."""


# ---- exact field arithmetic ------------------------------------------------

class DivisionByZero(TorusLabError, ZeroDivisionError):
    pass


class NotInvertible(TorusLabError):
    """Linear system for a field division is singular.

    For a genuinely independent monomial basis this cannot happen; it
    signals that the declared independence of the generators is wrong.
    """


class PrecisionExhausted(TorusLabError):
    """Interval refinement hit its iteration cap before deciding."""


class NotReal(TorusLabError):
    pass


class IncompatibleGenerators(TorusLabError):
    """Two fields declare the same generator name with different data."""


class IndependenceSuspect(TorusLabError):
    """The numeric screen found a small integer relation between
    elements that were declared linearly independent."""


# ---- torus construction ----------------------------------------------------

class DegenerateLattice(TorusLabError):
    pass


class NotSquareRootOfD(TorusLabError):
    pass


class NotAnEndomorphism(TorusLabError):
    pass


class PerfectSquare(TorusLabError):
    pass


# ---- endomorphism rings ----------------------------------------------------

class NotClosed(TorusLabError):
    """A product of basis endomorphisms left the computed Z-span."""


class UnrecognizedStructure(TorusLabError):
    pass


class NotPolarization(TorusLabError):
    pass


class NotStable(TorusLabError):
    """The Rosati image of an endomorphism fell outside the ring."""


class NoSuchElement(TorusLabError):
    pass


class NegativeDiscriminant(TorusLabError):
    """A Rosati-symmetric element has a non-positive discriminant; with a
    genuine polarization this contradicts a proved invariant."""


class BoundTooLarge(TorusLabError):
    pass


# ---- Neron-Severi ----------------------------------------------------------

class ScalarD(TorusLabError):
    pass


class NotInND(TorusLabError):
    pass


class NotABasis(TorusLabError):
    pass


class NotRational(TorusLabError):
    pass


class NotInEndo(TorusLabError):
    pass


# ---- example builders ------------------------------------------------------

class SquareProduct(TorusLabError):
    pass


class GenerationFailed(TorusLabError):
    pass


# ---- CLI -------------------------------------------------------------------

class ParseError(TorusLabError):
    pass


class ValidationError(TorusLabError):
    pass
