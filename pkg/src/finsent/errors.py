"""Exception types shared across the package."""

from __future__ import annotations


class FinsentError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FinsentError):
    """A data file could not be parsed. Carries file path and line number."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)


class ValidationError(FinsentError):
    """Input data violated a documented contract."""
