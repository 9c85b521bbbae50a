"""
CStar - Errors

Exception hierarchy shared by every stage. Each error carries the process
exit code the CLI reports for it and, when known, a source location.
"""

from typing import Optional


class CStarError(Exception):
    """Base class for all verifier errors."""

    exit_code = 1

    def __init__(self, message: str, file: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line

    def located(self, file: Optional[str], line: Optional[int]) -> "CStarError":
        """Attach a source location unless one is already present.

        Args:
            file (str, optional): Source file name
            line (int, optional): Line number

        Returns:
            CStarError: The same error, for re-raising
        """
        if self.file is None and file is not None:
            self.file = file
        if self.line is None and line is not None:
            self.line = line
        return self

    def describe(self) -> str:
        if self.file and self.line:
            return f"{self.file}:{self.line}: {self.message}"
        if self.file:
            return f"{self.file}: {self.message}"
        return self.message

    def __str__(self) -> str:
        return self.describe()


class ParseError(CStarError):
    """Syntax errors in C sources, proof code, or unsupported constructs."""

    exit_code = 3


class QuoteError(ParseError):
    """Errors raised while parsing or type checking a quotation."""


class KernelError(CStarError):
    """Rule application or term construction rejected by the kernel."""


class TermError(KernelError):
    """Ill-typed term construction."""


class RuleError(KernelError):
    """A primitive or derived rule was applied to unsuitable premises."""


class ArithError(KernelError):
    """The arithmetic oracle refused a formula."""

    def __init__(self, message: str, countermodel=None):
        super().__init__(message)
        self.countermodel = countermodel


class SemanticsError(CStarError):
    """The concrete evaluator cannot evaluate a term."""


class SymExecError(CStarError):
    """The symbolic execution engine cannot continue."""

    exit_code = 2


class VerificationFailure(CStarError):
    """A proof obligation was not discharged."""

    exit_code = 1


class StaleStateError(VerificationFailure):
    """A theorem does not start from the engine's current state."""


class ProofRuntimeError(CStarError):
    """Error raised while interpreting proof code."""

    def __init__(self, message: str, file: Optional[str] = None, line: Optional[int] = None,
                 cause: Optional[CStarError] = None):
        super().__init__(message, file, line)
        self.cause = cause
        if cause is not None:
            self.exit_code = cause.exit_code
