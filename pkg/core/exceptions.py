class InternalError(Exception):
    """
    Base error of the project: a machine-readable code plus free details.
    The code is printed on the diagnostics stream by the command layer.
    """

    code = "INTERNAL_ERROR"

    def __init__(self, code=None, details=None, message=None):
        self.code = code or self.code
        self.details = details or {}
        self.message = message or self.code.replace("_", " ").capitalize()
        super().__init__(self.message)

    def __str__(self):
        if not self.details:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.details.items())
        return f"{self.message} ({details})"


class ParseError(InternalError):
    code = "PARSE_ERROR"


class MissingTransition(InternalError):
    code = "MISSING_TRANSITION"


class DuplicateTransition(InternalError):
    code = "DUPLICATE_TRANSITION"


class UnknownSymbol(InternalError):
    code = "UNKNOWN_SYMBOL"


class BadInverseClosure(InternalError):
    code = "BAD_INVERSE_CLOSURE"


class NotInvertible(InternalError):
    code = "NOT_INVERTIBLE"


class NotBireversible(InternalError):
    code = "NOT_BIREVERSIBLE"


class InternalDisagreement(InternalError):
    """Two independent computations of the same property differ: a bug, never a user error."""

    code = "INTERNAL_DISAGREEMENT"


class AlphabetMismatch(InternalError):
    code = "ALPHABET_MISMATCH"


class NameCollision(InternalError):
    code = "NAME_COLLISION"


class OrbitCapExceeded(InternalError):
    code = "ORBIT_CAP_EXCEEDED"


class NotBinary(InternalError):
    code = "NOT_BINARY"


class DichotomyViolation(InternalError):
    code = "DICHOTOMY_VIOLATION"


class NotApplicable(InternalError):
    code = "NOT_APPLICABLE"


class SizeTooLarge(InternalError):
    code = "SIZE_TOO_LARGE"


class UnknownAutomaton(InternalError):
    code = "UNKNOWN_AUTOMATON"


class UnknownExperiment(InternalError):
    code = "UNKNOWN_EXPERIMENT"


class DegenerateTiling(InternalError):
    code = "DEGENERATE_TILING"
