"""Exceptions raised across the toolkit.

Everything derives from ValueError so plain `except ValueError` still works.
"""


class HalflineError(ValueError):
    """Base class for all domain errors."""


class NotSquare(HalflineError):
    pass


class NotHermitian(HalflineError):
    pass


class NotUnitary(HalflineError):
    pass


class DimensionMismatch(HalflineError):
    pass


class InvalidAtom(HalflineError):
    """Exponential atom that is not square integrable on its half-line."""


class OutOfDomain(HalflineError):
    """Point queried on the wrong side of a half-line anchor."""


class SideMismatch(HalflineError):
    pass


class NotInDomain(HalflineError):
    """Function violates the coupling u2(b) = W u1(a)."""


class TooCloseToRealAxis(HalflineError):
    """|Im lambda| is below min_imag; the resolvent is not evaluated there."""


class DegenerateKernel(HalflineError):
    """Resonant denominator mu - beta in a closed-form integral."""


class ZeroVector(HalflineError):
    pass


class WrongHalfPlane(HalflineError):
    pass


class MalformedInput(HalflineError):
    """Input file does not follow the JSON layout."""
