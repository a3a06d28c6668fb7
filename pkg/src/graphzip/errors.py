"""Exception hierarchy for graphzip.

Every failure mode raises a typed error so callers (and the CLI) can
distinguish malformed input data from malformed frames from exhausted
resource budgets. Nothing in the library raises bare ValueError at its
public boundaries.
"""

from __future__ import annotations


class GraphzipError(Exception):
    """Base class for all graphzip errors."""


class StreamError(GraphzipError):
    """A typed stream violates its structural invariants."""


class GraphError(GraphzipError):
    """A compressor graph is malformed or references unknown components."""


class CodecError(GraphzipError):
    """A codec precondition failed or a decode could not regenerate its input."""


class UnknownCodecError(CodecError):
    """A wire id is not present in the registry for the active format version."""

    def __init__(self, wire_id: int) -> None:
        super().__init__(f"unknown codec wire_id {wire_id}")
        self.wire_id = wire_id


class BudgetExceededError(GraphzipError):
    """A resource budget (nodes, depth, or bytes) was exhausted."""


class FrameError(GraphzipError):
    """Base class for frame parsing and serialization failures."""


class BadMagicError(FrameError):
    """The buffer does not start with the frame magic."""


class UnsupportedVersionError(FrameError):
    """The frame declares a format version this build cannot decode."""

    def __init__(self, version: int) -> None:
        super().__init__(f"unsupported format version {version}")
        self.version = version


class TruncatedFrameError(FrameError):
    """The frame ended before a declared field or payload."""


class MalformedFrameError(FrameError):
    """The frame parses but violates structural rules (bounds, types, order)."""


class ChecksumMismatchError(FrameError):
    """The regenerated content does not match the stored checksum."""


class LimitExceededError(FrameError):
    """A declared size in the frame exceeds the caller's decode limits."""


class ConfigError(GraphzipError):
    """A compressor config document is invalid or cannot be resolved."""


class SddlError(GraphzipError):
    """Base class for structured-data description failures."""


class SddlSyntaxError(SddlError):
    """Description text failed to compile; carries line/column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SddlRuntimeError(SddlError):
    """Input does not conform to the description (underrun, bad count)."""


class FuelExhaustedError(SddlRuntimeError):
    """Description execution ran out of fuel before finishing."""


class CsvError(GraphzipError):
    """Input is not parseable under the configured CSV dialect."""


class TrainingError(GraphzipError):
    """The trainer was given an unusable corpus or candidate set."""
