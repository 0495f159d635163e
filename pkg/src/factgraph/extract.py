"""LLM-driven triple extraction and constraint enforcement.

The extraction prompt asks for a pipe-delimited statement table; replies are
parsed leniently (optional header, markdown ruling, ragged rows skipped with
a reason) and the surviving candidates are filtered by the two-word and
non-empty label constraints before entering the graph.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .corpus import Chunk, Document, chunk_document
from .errors import EmptyLabel, LlmMalformedOutput
from .graph import KnowledgeGraph, SourceRef, Triple, TripleStatus
from .labels import normalize_label
from .prompts import build_extraction_prompt

logger = logging.getLogger(__name__)

MAX_LABEL_WORDS = 2
DEFAULT_CHUNK_WORDS = 400


@dataclass
class CandidateTriple:
    """A raw extraction row before constraint enforcement."""

    subject_raw: str
    predicate_raw: str
    object_raw: str
    negated: bool
    source: SourceRef
    rejection_reason: str | None = None


def parse_extraction_table(reply: str, source: SourceRef | None = None) -> list[CandidateTriple]:
    """Parse a pipe-delimited reply into candidates.

    Accepts an optional header row and markdown table ruling. A predicate
    beginning with the token "not" sets the negation flag and is stripped.
    Malformed rows are skipped with a logged reason; fully malformed input
    yields an empty list.
    """
    src = source or SourceRef(document_id="", page=1, chunk_index=0)
    candidates: list[CandidateTriple] = []
    for raw in reply.splitlines():
        line = raw.strip()
        if not line or "|" not in line:
            continue
        if set(line) <= set("|-: "):
            continue  # markdown ruling
        cells = [cell.strip() for cell in line.split("|")]
        if cells and cells[0] == "":
            cells = cells[1:]
        if cells and cells[-1] == "":
            cells = cells[:-1]
        if len(cells) != 3:
            logger.debug("skipping row with %d cells: %r", len(cells), raw)
            continue
        subject, predicate, obj = cells
        if [c.lower() for c in cells] == ["subject", "predicate", "object"]:
            continue
        predicate, negated = strip_negation(predicate)
        candidates.append(
            CandidateTriple(
                subject_raw=subject,
                predicate_raw=predicate,
                object_raw=obj,
                negated=negated,
                source=src,
            )
        )
    return candidates


def strip_negation(predicate: str) -> tuple[str, bool]:
    """Remove leading "not" tokens from a raw predicate; report whether any.

    A bare "not" with nothing after it is left alone.
    """
    negated = False
    text = predicate.strip()
    while text.lower().startswith("not ") and text[4:].strip():
        text = text[4:].strip()
        negated = True
    return text, negated


def _has_table(reply: str) -> bool:
    for raw in reply.splitlines():
        line = raw.strip()
        if "|" not in line or set(line) <= set("|-: "):
            continue
        cells = [c for c in (cell.strip() for cell in line.split("|")) if c != ""]
        if len(cells) >= 2:
            return True
    return False


def extract_candidates(chunk: Chunk, llm) -> list[CandidateTriple]:
    """Run the extraction prompt for one chunk and parse the reply.

    A fully unparseable reply is retried once; a second failure raises
    LlmMalformedOutput so the caller can record the chunk as failed and
    move on.
    """
    source = SourceRef(chunk.document_id, chunk.page, chunk.chunk_index)
    prompt = build_extraction_prompt(chunk.text)
    reply = llm.complete(prompt)
    candidates = parse_extraction_table(reply, source)
    if not candidates and not _has_table(reply):
        reply = llm.complete(prompt)
        candidates = parse_extraction_table(reply, source)
        if not candidates and not _has_table(reply):
            raise LlmMalformedOutput(
                f"no statement table in reply for chunk "
                f"({chunk.document_id!r}, page {chunk.page}, chunk {chunk.chunk_index})"
            )
    return candidates


def enforce_constraints(
    candidates: list[CandidateTriple],
) -> tuple[list[Triple], list[CandidateTriple]]:
    """Split candidates into accepted Triples and rejected rows.

    A candidate is accepted iff, after normalization, subject and object have
    at most two words, the predicate has at most two words with negation
    tokens excluded from the count, and all three labels are non-empty.
    Input order is preserved on both sides.
    """
    accepted: list[Triple] = []
    rejected: list[CandidateTriple] = []
    for candidate in candidates:
        reason = _constraint_violation(candidate)
        if reason is not None:
            rejected.append(replace(candidate, rejection_reason=reason))
            continue
        predicate, negated = strip_negation(candidate.predicate_raw)
        triple = Triple.create(
            candidate.subject_raw,
            predicate,
            candidate.object_raw,
            negated=candidate.negated or negated,
            provenance=[candidate.source],
            status=TripleStatus.PENDING,
        )
        accepted.append(triple)
    return accepted, rejected


def _constraint_violation(candidate: CandidateTriple) -> str | None:
    try:
        subject = normalize_label(candidate.subject_raw)
    except EmptyLabel:
        return "empty subject"
    predicate_text, _ = strip_negation(candidate.predicate_raw)
    try:
        predicate = normalize_label(predicate_text)
    except EmptyLabel:
        return "empty predicate"
    try:
        obj = normalize_label(candidate.object_raw)
    except EmptyLabel:
        return "empty object"
    if subject.word_count > MAX_LABEL_WORDS:
        return "subject exceeds two words"
    if predicate.word_count > MAX_LABEL_WORDS:
        return "predicate exceeds two words"
    if obj.word_count > MAX_LABEL_WORDS:
        return "object exceeds two words"
    return None


@dataclass
class ExtractionResult:
    """Outcome of extracting a whole corpus into a graph."""

    graph: KnowledgeGraph
    accepted: list[Triple] = field(default_factory=list)
    rejected: list[CandidateTriple] = field(default_factory=list)
    failed_chunks: list[dict] = field(default_factory=list)
    candidate_count: int = 0
    merged_count: int = 0


def extract_corpus(
    documents: list[Document],
    llm,
    chunk_words: int = DEFAULT_CHUNK_WORDS,
    parallelism: int = 1,
) -> ExtractionResult:
    """Chunk, extract, enforce, and deduplicate a corpus into a graph.

    Chunks are independent work items; extraction fans out across a thread
    pool but results are assembled in canonical chunk order, so the output
    is identical for any parallelism setting.
    """
    chunks: list[Chunk] = []
    for doc in documents:
        chunks.extend(chunk_document(doc, chunk_words))
    chunks.sort(key=lambda c: (c.document_id, c.page, c.chunk_index))

    def _run(chunk: Chunk):
        try:
            return extract_candidates(chunk, llm)
        except LlmMalformedOutput as exc:
            return exc

    if parallelism > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            outcomes = list(pool.map(_run, chunks))
    else:
        outcomes = [_run(chunk) for chunk in chunks]

    result = ExtractionResult(graph=KnowledgeGraph())
    for chunk, outcome in zip(chunks, outcomes):
        if isinstance(outcome, LlmMalformedOutput):
            result.failed_chunks.append(
                {
                    "document_id": chunk.document_id,
                    "page": chunk.page,
                    "chunk_index": chunk.chunk_index,
                    "error": str(outcome),
                }
            )
            continue
        result.candidate_count += len(outcome)
        accepted, rejected = enforce_constraints(outcome)
        result.rejected.extend(rejected)
        for triple in accepted:
            result.accepted.append(triple)
            if result.graph.upsert(triple) == "merged":
                result.merged_count += 1
    return result
