"""Diagnostic types shared by the parsers and validators."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """Location of a construct in an input text (1-based line/column)."""

    line: int
    column: int
    offset: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """A single validation or parse finding. Never raised; always returned."""

    severity: str
    code: str
    message: str
    span: SourceSpan | None = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span is not None else ""
        return f"{where}{self.severity}: {self.message} [{self.code}]"


def error(code: str, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic(ERROR, code, message, span)


def warning(code: str, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic(WARNING, code, message, span)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)
