"""Event-sourced project persistence.

The logs are the truth: an extraction report, a validation audit log, and an
append-only review event log. The N-Triples snapshot and its JSON-Lines
sidecar are derived artifacts that can always be rebuilt by folding the logs,
byte-identically. Review events carry timestamps (they are the record of
human decisions); validation records deliberately do not, so pipeline runs
stay byte-reproducible.
"""

from __future__ import annotations

import json
import shutil
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document, load_corpus
from .errors import CorruptLog, UnknownTripleId
from .extract import ExtractionResult
from .graph import (
    EXPERT_LABELS,
    KnowledgeGraph,
    PUBLISHED_STATUSES,
    SourceRef,
    Triple,
    TripleStatus,
)
from .ntriples import serialize_ntriples
from .validate import ValidationRecord

CORPUS_FILE = "corpus.jsonl"
EXTRACTION_FILE = "extraction.jsonl"
EXTRACTION_FAILURES_FILE = "extraction_failures.jsonl"
VALIDATION_FILE = "validation.jsonl"
REVIEWS_FILE = "reviews.jsonl"
SNAPSHOT_FILE = "graph.nt"
SIDECAR_FILE = "sidecar.jsonl"
CACHE_DIR = "cache"


@dataclass(frozen=True)
class ReviewEvent:
    triple_id: str
    expert_label: TripleStatus
    reviewer: str
    note: str = ""
    timestamp: str = ""

    def as_dict(self) -> dict:
        return {
            "triple_id": self.triple_id,
            "expert_label": self.expert_label.value,
            "reviewer": self.reviewer,
            "note": self.note,
            "timestamp": self.timestamp,
        }


@dataclass
class ProjectState:
    """In-memory fold of the project logs."""

    graph: KnowledgeGraph = field(default_factory=KnowledgeGraph)
    validation_records: dict[str, ValidationRecord] = field(default_factory=dict)
    machine_outcomes: dict[str, TripleStatus] = field(default_factory=dict)
    review_events: list[ReviewEvent] = field(default_factory=list)
    latest_reviews: dict[str, ReviewEvent] = field(default_factory=dict)
    rejected_count: int = 0
    candidate_count: int = 0


class ProjectStore:
    """Single-writer project directory; readers always see a folded state."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.RLock()
        self.state = ProjectState()

    # -- paths ---------------------------------------------------------

    def path(self, name: str) -> Path:
        return self.root / name

    @property
    def cache_dir(self) -> Path:
        return self.root / CACHE_DIR

    def exists(self) -> bool:
        return self.root.is_dir()

    def create(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    # -- ingest ---------------------------------------------------------

    def ingest(self, corpus_path: str | Path) -> list[Document]:
        documents = load_corpus(corpus_path)
        self.create()
        if Path(corpus_path).resolve() != self.path(CORPUS_FILE).resolve():
            shutil.copyfile(corpus_path, self.path(CORPUS_FILE))
        return documents

    def load_documents(self) -> list[Document]:
        return load_corpus(self.path(CORPUS_FILE))

    # -- extraction -----------------------------------------------------

    def save_extraction(self, result: ExtractionResult) -> None:
        """Persist the per-candidate report and refold."""
        rows = []
        for triple in result.accepted:
            rows.append(
                {
                    "accepted": True,
                    "triple_id": triple.id,
                    "subject": triple.subject.text,
                    "predicate": triple.predicate.text,
                    "object": triple.object.text,
                    "negated": triple.negated,
                    "rejection_reason": None,
                    "source": triple.provenance[0].as_dict() if triple.provenance else None,
                }
            )
        for candidate in result.rejected:
            rows.append(
                {
                    "accepted": False,
                    "triple_id": None,
                    "subject": candidate.subject_raw,
                    "predicate": candidate.predicate_raw,
                    "object": candidate.object_raw,
                    "negated": candidate.negated,
                    "rejection_reason": candidate.rejection_reason,
                    "source": candidate.source.as_dict(),
                }
            )
        with self._lock:
            self.create()
            _write_jsonl(self.path(EXTRACTION_FILE), rows)
            _write_jsonl(self.path(EXTRACTION_FAILURES_FILE), result.failed_chunks)
            self.reload()

    # -- validation ------------------------------------------------------

    def append_validation(self, records: list[ValidationRecord]) -> None:
        with self._lock:
            _append_jsonl(self.path(VALIDATION_FILE), [r.as_dict() for r in records])
            self.reload()

    # -- reviews ----------------------------------------------------------

    def append_review(self, event: ReviewEvent) -> ReviewEvent:
        """Append one expert decision and apply it; latest event wins."""
        with self._lock:
            if event.triple_id not in self.state.graph:
                raise UnknownTripleId(event.triple_id)
            if event.expert_label not in EXPERT_LABELS:
                raise ValueError(f"not an expert label: {event.expert_label}")
            if not event.timestamp:
                stamp = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
                event = ReviewEvent(
                    triple_id=event.triple_id,
                    expert_label=event.expert_label,
                    reviewer=event.reviewer,
                    note=event.note,
                    timestamp=stamp,
                )
            _append_jsonl(self.path(REVIEWS_FILE), [event.as_dict()])
            self.state.review_events.append(event)
            self.state.latest_reviews[event.triple_id] = event
            self.state.graph.set_expert_status(event.triple_id, event.expert_label)
            self.write_snapshot()
            return event

    # -- folding -----------------------------------------------------------

    def reload(self) -> None:
        """Refold the logs into memory and rewrite the derived snapshot."""
        with self._lock:
            self.state = self._fold()
            self.write_snapshot()

    def load(self) -> None:
        """Fold the logs into memory without touching the snapshot files."""
        with self._lock:
            self.state = self._fold()

    def _fold(self) -> ProjectState:
        state = ProjectState()
        for lineno, row in _read_jsonl(self.path(EXTRACTION_FILE)):
            state.candidate_count += 1
            if not row.get("accepted"):
                state.rejected_count += 1
                continue
            source = row.get("source")
            provenance = [SourceRef(**source)] if source else []
            try:
                triple = Triple.create(
                    row["subject"],
                    row["predicate"],
                    row["object"],
                    negated=bool(row.get("negated")),
                    provenance=provenance,
                )
            except Exception as exc:
                raise CorruptLog(f"bad extraction row: {exc}", lineno) from None
            state.graph.upsert(triple)

        for lineno, row in _read_jsonl(self.path(VALIDATION_FILE)):
            try:
                record = ValidationRecord.from_dict(row)
            except Exception as exc:
                raise CorruptLog(f"bad validation row: {exc}", lineno) from None
            state.validation_records[record.triple_id] = record
        for tid, record in state.validation_records.items():
            state.machine_outcomes[tid] = record.outcome
            if tid in state.graph:
                state.graph.set_machine_status(tid, record.outcome)

        for lineno, row in _read_jsonl(self.path(REVIEWS_FILE)):
            try:
                event = ReviewEvent(
                    triple_id=row["triple_id"],
                    expert_label=TripleStatus(row["expert_label"]),
                    reviewer=row.get("reviewer", ""),
                    note=row.get("note", ""),
                    timestamp=row.get("timestamp", ""),
                )
            except Exception as exc:
                raise CorruptLog(f"bad review row: {exc}", lineno) from None
            state.review_events.append(event)
            state.latest_reviews[event.triple_id] = event
        for tid, event in state.latest_reviews.items():
            if tid in state.graph:
                state.graph.set_expert_status(tid, event.expert_label)
        return state

    # -- derived artifacts ---------------------------------------------------

    def write_snapshot(self) -> None:
        with self._lock:
            self.create()
            _atomic_write(self.path(SNAPSHOT_FILE), serialize_ntriples(self.state.graph))
            sidecar_rows = [self._sidecar_row(t) for t in self.state.graph.triples()]
            _atomic_write(
                self.path(SIDECAR_FILE),
                "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in sidecar_rows),
            )

    def _sidecar_row(self, triple: Triple) -> dict:
        review = self.state.latest_reviews.get(triple.id)
        machine = self.state.machine_outcomes.get(triple.id)
        return {
            "triple_id": triple.id,
            "subject": triple.subject.text,
            "predicate": triple.predicate.text,
            "object": triple.object.text,
            "negated": triple.negated,
            "status": triple.status.value,
            "provenance": [ref.as_dict() for ref in triple.provenance],
            "machine_outcome": machine.value if machine else None,
            "reviewed_at": review.timestamp if review else None,
            "reviewer": review.reviewer if review else None,
        }

    def published_graph(self) -> KnowledgeGraph:
        """The exported view: factual and expert-factual triples only."""
        published = KnowledgeGraph()
        for triple in self.state.graph.triples():
            if triple.status in PUBLISHED_STATUSES:
                published.upsert(triple)
        return published


def rebuild_store(root: str | Path) -> ProjectStore:
    """Refold logs and rewrite snapshot + sidecar; idempotent."""
    store = ProjectStore(root)
    store.reload()
    return store


def open_store(root: str | Path) -> ProjectStore:
    store = ProjectStore(root)
    store.load()
    return store


# -- small file helpers ------------------------------------------------------


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    _atomic_write(path, "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows))


def _append_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")


def _read_jsonl(path: Path):
    if not path.exists():
        return
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptLog(f"invalid JSON: {exc}", lineno) from None


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)
