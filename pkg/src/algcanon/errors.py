"""Exception hierarchy shared by every module of the package."""


class AlgCanonError(Exception):
    """Base class for all errors raised by algcanon."""


class DivisionByZero(AlgCanonError, ZeroDivisionError):
    pass


class NonInvertibleDual(DivisionByZero):
    """A dual number with zero value part has no inverse."""


class KindMismatch(AlgCanonError, TypeError):
    """Operands live over different scalar fields."""


class DimensionMismatch(AlgCanonError, ValueError):
    pass


class SingularMatrix(AlgCanonError, ArithmeticError):
    pass


class UnsupportedField(AlgCanonError, ValueError):
    """Characteristic 2, a composite modulus, or an unknown field spec."""


class SymmetryViolation(AlgCanonError, ValueError):
    """Entries break the declared symmetry class.

    ``index`` is the first offending (i, j, k), 1-based.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ParseError(AlgCanonError, ValueError):
    def __init__(self, message, location=None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class ProfileMismatch(AlgCanonError, ValueError):
    """Objects built under different canonicalization profiles were mixed."""


class NonGenericInput(AlgCanonError):
    """The input lies off the generic set of the profile; the method abstains.

    ``reports`` holds one :class:`~algcanon.canonical.GenericityReport`
    per offending input.
    """

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = tuple(reports)


class NonGenericProbe(AlgCanonError):
    """Every random probe point drawn for a measurement was non-generic."""


class AssumptionViolation(AlgCanonError):
    """No frame could be built for the class within the search limits.

    ``report`` is a JSON-ready dict with the ranks reached per power and the
    stabilizer dimension measured at the probe point.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class WitnessVerificationFailure(AlgCanonError, AssertionError):
    """Internal consistency failure: a recovered witness did not verify."""
