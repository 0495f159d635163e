"""Knowledge-graph construction from text with search-backed fact validation."""

from .graph import KnowledgeGraph, SourceRef, Triple, TripleStatus
from .labels import Label, mint_iri, normalize_label
from .ntriples import parse_ntriples, serialize_ntriples
from .validate import DasConfig, ValidationRecord, majority_vote, validate_triple

__version__ = "0.1.0"

__all__ = [
    "DasConfig",
    "KnowledgeGraph",
    "Label",
    "SourceRef",
    "Triple",
    "TripleStatus",
    "ValidationRecord",
    "majority_vote",
    "mint_iri",
    "normalize_label",
    "parse_ntriples",
    "serialize_ntriples",
    "validate_triple",
    "__version__",
]
