"""Error taxonomy shared by the parser, validator, evaluator and IR interpreter."""
from __future__ import annotations


class DeltaError(Exception):
    """Base class for every error raised by the toolchain."""

    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    @property
    def kind(self) -> str:
        return type(self).__name__

    def render(self) -> str:
        where = self.span.render() if self.span is not None else "<unknown>"
        return f"{where}: error[{self.kind}]: {self.message}"


class ArgumentError(DeltaError, ValueError):
    """Bad arguments to a library operation (e.g. duplicate keys in addValues)."""


class ValueSyntaxError(DeltaError, ValueError):
    """Malformed canonical value text."""


# -- parsing ---------------------------------------------------------------


class ParseError(DeltaError):
    def __init__(self, message: str, span=None, expected=frozenset()):
        super().__init__(message, span)
        self.expected = frozenset(expected)


class ParseFailed(DeltaError):
    """Raised once per file, carrying every recovered ParseError."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__(f"{len(self.errors)} parse error(s)", self.errors[0].span if self.errors else None)


# -- validation ------------------------------------------------------------


class SemanticError(DeltaError):
    pass


class UnknownSymbol(SemanticError):
    pass


class ArityMismatch(SemanticError):
    pass


class Redeclaration(SemanticError):
    pass


class ReturnOutsideBody(SemanticError):
    pass


class UndeclaredVariable(SemanticError):
    pass


class MisplacedDeclaration(SemanticError):
    pass


class InvalidCondition(SemanticError):
    pass


class IllegalSymbol(SemanticError):
    """Symbol of the wrong kind for its position (e.g. a D-function inside a quantifier-free formula)."""


class DuplicateName(SemanticError):
    pass


class EmptyFamily(SemanticError):
    pass


class ValidationFailed(DeltaError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__(f"{len(self.errors)} semantic error(s)", self.errors[0].span if self.errors else None)


# -- evaluation ------------------------------------------------------------


class EvalError(DeltaError):
    pass


class UnboundVariable(EvalError):
    pass


class DeltaTypeError(EvalError, TypeError):
    pass


class DivisionByZero(EvalError):
    pass


class BoundViolation(EvalError):
    def __init__(self, message: str, variable=None, size=None, bound=None, span=None):
        super().__init__(message, span)
        self.variable = variable
        self.size = size
        self.bound = bound


class MeterExceeded(EvalError):
    def __init__(self, message: str, steps: int = 0, budget: int = 0, span=None):
        super().__init__(message, span)
        self.steps = steps
        self.budget = budget
        self.trace = None


class Unsupported(DeltaError):
    pass
