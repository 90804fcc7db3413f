"""
Exception hierarchy shared by the solvers, the oracles and the command line.
Each class carries the process exit code the CLI maps it to.
"""
from typing import Any


class StarlikeError(Exception):
    exit_code: int = 2


class ParameterError(StarlikeError, ValueError):
    """A class, region or flag parameter is out of range."""


class DomainError(ParameterError):
    """A function was evaluated outside its domain (e.g. r >= 1)."""


class ValidityError(StarlikeError):
    """A margin was requested for a disc center outside the lemma's interval."""


class NoRootError(StarlikeError):
    exit_code = 3


class SingularityError(StarlikeError, ArithmeticError):
    pass


class UnsupportedError(StarlikeError):
    """Sharpness is not established for the requested class or parameters."""


class ViolationError(StarlikeError):
    exit_code = 4

    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.witness = witness or {}


class OutputError(StarlikeError):
    """A result file could not be written."""
