"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class FactGraphError(Exception):
    """Base class for all toolkit errors."""


class EmptyLabel(FactGraphError):
    """Raised when a label normalizes to the empty string."""


class ParseError(FactGraphError):
    """Malformed line in a serialized graph file."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedIri(FactGraphError):
    """IRI outside the toolkit's urn scheme, or of the wrong kind."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CorpusFormatError(FactGraphError):
    """Corpus record missing required fields or carrying bad types."""


class DuplicatePage(FactGraphError):
    """Corpus contains two records for the same (document_id, page)."""


class LlmUnavailable(FactGraphError):
    """LLM endpoint unreachable after retries."""


class LlmMalformedOutput(FactGraphError):
    """LLM reply contained nothing parseable, even after retry."""


class AuthError(FactGraphError):
    """Service rejected the configured credentials."""


class SearchUnavailable(FactGraphError):
    """Search endpoint unreachable."""


class RateLimited(FactGraphError):
    """Service signalled rate limiting after backoff."""


class PageRankUnavailable(FactGraphError):
    """Page-rank endpoint unreachable."""


class FetchFailure(FactGraphError):
    """Evidence page could not be fetched."""


class ProtocolError(FactGraphError):
    """Provider returned a value outside its documented contract."""


class ReplayMiss(FactGraphError):
    """Replay-mode request not present in the cache."""


class VerdictUnparseable(FactGraphError):
    """Judge reply did not contain a recognizable yes/no verdict."""


class BenchmarkFormatError(FactGraphError):
    """Malformed benchmark row."""

    def __init__(self, message: str, row: int):
        super().__init__(f"row {row}: {message}")
        self.row = row


class LengthMismatch(FactGraphError):
    """Gold and predicted sequences differ in length."""


class EmptyMatrix(FactGraphError):
    """Confusion matrix with no classified items."""


class UnknownTripleId(FactGraphError):
    """Correction or review references a triple id not in the dataset."""


class NoOpCorrection(FactGraphError):
    """Correction does not change the current gold label."""


class NoOverlap(FactGraphError):
    """No comparable machine/expert pairs."""


class UnknownEntity(FactGraphError):
    """Query references an entity label absent from the graph."""


class CorruptLog(FactGraphError):
    """Unreadable line in a project log file."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
