"""Exception hierarchy shared by every stage of the analysis pipeline."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, FrozenSet, List, Optional, Sequence

if TYPE_CHECKING:
    from ajlint.model.program import Diagnostic, ProgramModel
    from ajlint.oracle.trace import ExecutionTrace
    from ajlint.syntax.tokens import Span


class AjlintError(Exception):
    """Base class for all ajlint failures."""

    def __init__(self, message: str, span: Optional["Span"] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def location(self) -> str:
        if self.span is None:
            return "<unknown>"
        return f"{self.span.file}:{self.span.line}:{self.span.column}"

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.location()}: error: {self.message}"


class InputError(AjlintError):
    """An input path is missing or unreadable."""

    def __init__(self, message: str, path: str):
        super().__init__(message)
        self.path = path

    def __str__(self) -> str:
        return f"{self.path}: error: {self.message}"


class LexError(AjlintError):
    pass


class ParseError(AjlintError):
    """Raised at the first syntax error; carries the set of acceptable tokens."""

    def __init__(self, message: str, span: "Span", expected: FrozenSet[str] = frozenset()):
        super().__init__(message, span)
        self.expected = expected


class ModelError(AjlintError):
    """Aggregates every semantic error found by the model builder.

    The partially resolved model stays available on ``model`` for inspection.
    """

    def __init__(self, diagnostics: Sequence["Diagnostic"], model: "ProgramModel"):
        errors = [d for d in diagnostics if d.is_error]
        super().__init__(f"{len(errors)} semantic error(s)", errors[0].span if errors else None)
        self.diagnostics: List["Diagnostic"] = list(diagnostics)
        self.model = model

    def __str__(self) -> str:
        return "\n".join(str(d) for d in self.diagnostics if d.is_error)


class InternalInconsistency(AjlintError):
    """The classifier was about to emit an output violating its own invariants."""


class EmptyShadowWarning(UserWarning):
    """A pointcut selects no join-point shadow in the program."""

    def __init__(self, advice_ref: str, span: Optional["Span"] = None):
        super().__init__(f"pointcut of {advice_ref} matches no join point shadow")
        self.advice_ref = advice_ref
        self.span = span


class InterpreterError(AjlintError):
    """Base for failures raised while executing a program; keeps the trace prefix."""

    def __init__(self, message: str, span: Optional["Span"] = None, trace: Optional["ExecutionTrace"] = None):
        super().__init__(message, span)
        self.trace = trace


class FuelExhausted(InterpreterError):
    pass


class RuntimeFault(InterpreterError):
    pass


class MalformedTrace(AjlintError):
    def __init__(self, message: str, event: Any = None):
        super().__init__(message)
        self.event = event
