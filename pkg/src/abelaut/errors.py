"""Exception hierarchy.

Everything raised on purpose by the library derives from AbelautError, so
callers (and the CLI) can separate verification problems from bugs.
"""


class AbelautError(Exception):
    pass


class InvalidConductor(AbelautError, ValueError):
    pass


class UnsupportedDegree(AbelautError, ValueError):
    pass


class ArityError(AbelautError, ValueError):
    pass


class InvalidMap(AbelautError, ValueError):
    pass


class DegenerateInput(AbelautError, ValueError):
    pass


class InconsistencyError(AbelautError):
    """A set that should be a group is not closed; points at an enumeration bug."""


class BadReduction(AbelautError, ValueError):
    pass


class InvalidComplexStructure(AbelautError, ValueError):
    pass


class NotAnAutomorphism(AbelautError, ValueError):
    pass


class TranslationCase(AbelautError, ValueError):
    pass


class BudgetError(AbelautError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotStable(AbelautError, ValueError):
    pass


class NothingToQuotient(AbelautError, ValueError):
    pass


class InvalidDatum(AbelautError, ValueError):
    pass


class DescentError(AbelautError):
    pass


class ParseError(AbelautError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position
