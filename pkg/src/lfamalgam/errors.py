"""Exception taxonomy shared by every module and mapped to CLI exit codes."""


class LfAmalgamError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 2


class GroupTableError(LfAmalgamError):
    def __init__(self, message, witness=()):
        super().__init__(message)
        self.witness = tuple(witness)


class NotClosed(GroupTableError):
    pass


class NoIdentityAtZero(GroupTableError):
    pass


class NotAssociative(GroupTableError):
    pass


class NoInverse(GroupTableError):
    pass


class IndexOutOfRange(LfAmalgamError):
    pass


class NotASubgroup(LfAmalgamError):
    pass


class NotAnEmbedding(LfAmalgamError):
    pass


class ArityMismatch(LfAmalgamError):
    pass


class BaseMismatch(LfAmalgamError):
    pass


class NotATransversal(LfAmalgamError):
    pass


class IdentityNotRepresentative(LfAmalgamError):
    pass


class BudgetExceeded(LfAmalgamError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class ElementInBase(LfAmalgamError):
    pass


class InvariantViolation(LfAmalgamError):
    def __init__(self, clause, message=""):
        super().__init__(f"{clause}: {message}" if message else clause)
        self.clause = clause


class ParameterNotOrderTwo(LfAmalgamError):
    pass


class NotAFullListing(LfAmalgamError):
    pass


class PreconditionFailed(LfAmalgamError):
    def __init__(self, clause, message=""):
        super().__init__(f"{clause}: {message}" if message else clause)
        self.clause = clause


class NoSwapRealization(LfAmalgamError):
    pass


class SymmetryCheckFailed(LfAmalgamError):
    """Raised when a theorem-backed check fails; always indicates a bug."""

    exit_code = 1


class ProbeInvalid(LfAmalgamError):
    def __init__(self, clause, message=""):
        super().__init__(f"{clause}: {message}" if message else clause)
        self.clause = clause


class ParseError(LfAmalgamError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class UnknownSuite(LfAmalgamError):
    pass


class CorpusLoadError(LfAmalgamError):
    def __init__(self, path, cause):
        super().__init__(f"{path}: {cause}")
        self.path = path
        self.cause = cause
