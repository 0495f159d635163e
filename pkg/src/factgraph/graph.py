"""Triple and graph data model: dedup, indexes, statistics, novelty.

A triple's identity is the content hash of (subject, predicate, object,
negated); provenance and status ride along without affecting identity.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

from .labels import Label, normalize_label


class TripleStatus(str, Enum):
    PENDING = "pending"
    FACTUAL = "factual"
    NON_FACTUAL = "non-factual"
    UNVERIFIABLE = "unverifiable"
    EXPERT_FACTUAL = "expert-factual"
    EXPERT_NON_FACTUAL = "expert-non-factual"


MACHINE_OUTCOMES = (
    TripleStatus.FACTUAL,
    TripleStatus.NON_FACTUAL,
    TripleStatus.UNVERIFIABLE,
)
EXPERT_LABELS = (TripleStatus.EXPERT_FACTUAL, TripleStatus.EXPERT_NON_FACTUAL)

# Statuses included in the published (exported) graph.
PUBLISHED_STATUSES = (TripleStatus.FACTUAL, TripleStatus.EXPERT_FACTUAL)


@dataclass(frozen=True, order=True)
class SourceRef:
    """Provenance pointer: which chunk of which page produced a triple."""

    document_id: str
    page: int
    chunk_index: int

    def as_dict(self) -> dict:
        return {
            "document_id": self.document_id,
            "page": self.page,
            "chunk_index": self.chunk_index,
        }


def triple_id(subject: Label, predicate: Label, obj: Label, negated: bool) -> str:
    payload = "\x1f".join([subject.text, predicate.text, obj.text, "1" if negated else "0"])
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class Triple:
    """One (subject, predicate, object) statement with negation and audit fields."""

    id: str
    subject: Label
    predicate: Label
    object: Label
    negated: bool
    provenance: list[SourceRef] = field(default_factory=list)
    status: TripleStatus = TripleStatus.PENDING

    @classmethod
    def create(
        cls,
        subject: str | Label,
        predicate: str | Label,
        obj: str | Label,
        negated: bool = False,
        provenance: list[SourceRef] | None = None,
        status: TripleStatus = TripleStatus.PENDING,
    ) -> "Triple":
        """Normalize fields, fold a leading "not " predicate token into the
        negation flag, and mint the content id."""
        s = subject if isinstance(subject, Label) else normalize_label(subject)
        p = predicate if isinstance(predicate, Label) else normalize_label(predicate)
        o = obj if isinstance(obj, Label) else normalize_label(obj)
        while p.text.startswith("not "):
            p = normalize_label(p.text[4:])
            negated = True
        return cls(
            id=triple_id(s, p, o, negated),
            subject=s,
            predicate=p,
            object=o,
            negated=negated,
            provenance=list(provenance or []),
            status=status,
        )

    def key(self) -> tuple[str, str, str, bool]:
        return (self.subject.text, self.predicate.text, self.object.text, self.negated)

    def query_form(self) -> str:
        """Predicate text with the negation surfaced, e.g. ``not restore``."""
        return f"not {self.predicate.text}" if self.negated else self.predicate.text

    def sentence(self) -> str:
        return f"{self.subject.text} {self.query_form()} {self.object.text}."


@dataclass(frozen=True)
class GraphStats:
    triple_count: int
    unique_entity_count: int
    unique_relation_count: int
    status_histogram: dict


class KnowledgeGraph:
    """Deduplicated triple set with subject/object/predicate indexes.

    Many readers may share a graph; mutations must be serialized by the
    owner (the project store funnels them through a single writer).
    """

    def __init__(self) -> None:
        self._triples: dict[str, Triple] = {}
        self.subject_index: dict[str, set[str]] = {}
        self.object_index: dict[str, set[str]] = {}
        self.predicate_index: dict[str, set[str]] = {}

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, tid: str) -> bool:
        return tid in self._triples

    def get(self, tid: str) -> Triple | None:
        return self._triples.get(tid)

    def triples(self) -> list[Triple]:
        """All triples, sorted by id for deterministic iteration."""
        return [self._triples[tid] for tid in sorted(self._triples)]

    def upsert(self, triple: Triple) -> str:
        """Insert ``triple`` or merge provenance into an existing duplicate.

        Returns ``"inserted"`` or ``"merged"``. On merge the existing status
        is kept and provenance lists are unioned in first-seen order.
        """
        existing = self._triples.get(triple.id)
        if existing is not None:
            for ref in triple.provenance:
                if ref not in existing.provenance:
                    existing.provenance.append(ref)
            return "merged"
        self._triples[triple.id] = triple
        self.subject_index.setdefault(triple.subject.text, set()).add(triple.id)
        self.object_index.setdefault(triple.object.text, set()).add(triple.id)
        self.predicate_index.setdefault(triple.predicate.text, set()).add(triple.id)
        return "inserted"

    def set_machine_status(self, tid: str, outcome: TripleStatus) -> bool:
        """Apply a machine outcome; only pending triples may transition.

        Returns True when applied. Expert labels are never overwritten.
        """
        if outcome not in MACHINE_OUTCOMES:
            raise ValueError(f"not a machine outcome: {outcome}")
        triple = self._triples[tid]
        if triple.status is not TripleStatus.PENDING:
            return False
        triple.status = outcome
        return True

    def set_expert_status(self, tid: str, label: TripleStatus) -> None:
        """Apply an expert label; overrides any machine status."""
        if label not in EXPERT_LABELS:
            raise ValueError(f"not an expert label: {label}")
        self._triples[tid].status = label

    def entity_labels(self) -> set[str]:
        return set(self.subject_index) | set(self.object_index)

    def relation_labels(self) -> set[str]:
        return set(self.predicate_index)

    def has_entity(self, label: str) -> bool:
        return label in self.subject_index or label in self.object_index

    def stats(self) -> GraphStats:
        histogram = {status.value: 0 for status in TripleStatus}
        for triple in self._triples.values():
            histogram[triple.status.value] += 1
        return GraphStats(
            triple_count=len(self._triples),
            unique_entity_count=len(self.entity_labels()),
            unique_relation_count=len(self.relation_labels()),
            status_histogram=histogram,
        )

    def novelty_report(
        self,
        reference_entity_labels: set[str],
        reference_relation_labels: set[str],
    ) -> tuple[float, float]:
        """Fractions of entity/relation labels absent from the reference sets.

        An empty graph reports (0.0, 0.0): nothing present, nothing novel.
        """
        entities = self.entity_labels()
        relations = self.relation_labels()
        entity_novel = (
            len(entities - reference_entity_labels) / len(entities) if entities else 0.0
        )
        relation_novel = (
            len(relations - reference_relation_labels) / len(relations) if relations else 0.0
        )
        return entity_novel, relation_novel


def compute_stats(graph: KnowledgeGraph) -> GraphStats:
    return graph.stats()
