"""Exception hierarchy shared by every module."""


class PmlogError(Exception):
    """Base class for all errors raised by the package."""


class EvaluationError(PmlogError):
    pass


class NonGroundEvaluation(EvaluationError):
    """A built-in was asked to evaluate a term that still contains variables."""


class TypeMismatch(EvaluationError):
    """A built-in was applied to values of the wrong sort."""


class ProgramError(PmlogError):
    """A program text or structure is malformed.

    ``line`` and ``col`` are 1-based and may be ``None`` when the error was not
    produced from source text.
    """

    tag = "ERROR"

    def __init__(self, message, line=None, col=None, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        super().__init__(self.render())

    def render(self, filename=None):
        where = ""
        if self.line is not None:
            where = f"{self.line}:{self.col}: "
            if filename:
                where = f"{filename}:{where}"
        elif filename:
            where = f"{filename}: "
        text = f"{where}[{self.tag}] {self.message}"
        if self.expected:
            text += " (expected " + ", ".join(self.expected) + ")"
        return text


class ParseError(ProgramError):
    tag = "SYNTAX"


class BindingError(ProgramError):
    """A variable is consumed before it is bound, or a binder re-binds a variable."""

    tag = "BINDING"


class ArityError(ProgramError):
    tag = "ARITY"


class RowError(PmlogError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")


class LimitExceeded(PmlogError):
    """Saturation hit one of its limits; ``partial`` holds the models found so far."""

    def __init__(self, reason, partial, path=None):
        self.reason = reason
        self.partial = partial
        self.path = path
        super().__init__(f"limit exceeded: {reason}")


class StaleFact(PmlogError):
    def __init__(self, atom, clock):
        self.atom = atom
        self.clock = clock
        super().__init__(f"fact {atom} precedes path clock {clock}")


class UnsupportedGCI(PmlogError):
    pass


class ProgramRejected(PmlogError):
    """The program is not range-restricted or not stratified; see ``violations``."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0].render() if self.violations else "rejected"
        more = f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
        super().__init__(first + more)
