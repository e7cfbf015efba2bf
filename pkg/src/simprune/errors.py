"""Exception types shared across the package."""

from __future__ import annotations


class SimpruneError(Exception):
    """Base class for all errors raised by simprune."""


class DimensionMismatch(SimpruneError, ValueError):
    """Bit-vector / bit-matrix operands have incompatible lengths."""


class ParseError(SimpruneError, ValueError):
    """Malformed N-Triples or query text.

    ``line`` and ``column`` are 1-based; either may be ``None`` when unknown.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UnsupportedFeature(SimpruneError, ValueError):
    """Syntactically recognised construct that lies outside the supported fragment."""

    def __init__(self, feature: str, detail: str = ""):
        self.feature = feature
        msg = f"unsupported feature: {feature}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class OracleRefusal(SimpruneError, RuntimeError):
    """The brute-force oracle refuses inputs above its size guard."""


class VerificationFailure(SimpruneError, AssertionError):
    """A soundness cross-check against the oracle failed."""
