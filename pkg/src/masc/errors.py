from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    message: str
    pos: Optional[Pos] = None
    rule: str = "error"
    severity: str = "error"

    @property
    def is_error(self) -> bool:
        return self.severity == "error"

    def __str__(self) -> str:
        where = f"{self.pos}: " if self.pos else ""
        return f"{where}{self.severity}: {self.message} [{self.rule}]"


class MascError(Exception):
    pass


class _DiagnosticsError(MascError):
    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class ParseError(_DiagnosticsError):
    pass


class CheckError(_DiagnosticsError):
    pass


class MascRuntimeError(MascError):
    pass


class AssertionFailure(MascRuntimeError):
    """A MASC ``assert`` evaluated to zero."""

    def __init__(self, function: str, pos: Optional[Pos] = None):
        self.function = function
        self.pos = pos
        where = f" at {pos}" if pos else ""
        super().__init__(f"assertion failed in {function}{where}")


class TranslationError(MascError):
    pass


class IREvalError(MascError):
    pass
