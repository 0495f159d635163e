"""Corpus loading and chunking.

A corpus enters as JSON Lines, one record per page:
``{"document_id": ..., "page": ..., "text": ...}``. Pages are split at
sentence boundaries into chunks small enough for one extraction call.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusFormatError, DuplicatePage

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


@dataclass(frozen=True)
class Page:
    number: int
    text: str


@dataclass
class Document:
    document_id: str
    pages: list[Page]


@dataclass(frozen=True)
class Chunk:
    document_id: str
    page: int
    chunk_index: int
    text: str
    word_count: int


def load_corpus(path: str | Path) -> list[Document]:
    """Assemble Documents from a page-per-line JSONL file.

    Pages come back in ascending page order; documents in first-seen order.
    """
    seen: set[tuple[str, int]] = set()
    by_doc: dict[str, list[Page]] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise CorpusFormatError(f"line {lineno}: record is not an object")
            for field in ("document_id", "page", "text"):
                if field not in record:
                    raise CorpusFormatError(f"line {lineno}: missing field {field!r}")
            doc_id = record["document_id"]
            page = record["page"]
            text = record["text"]
            if not isinstance(doc_id, str) or not doc_id:
                raise CorpusFormatError(f"line {lineno}: document_id must be a non-empty string")
            if not isinstance(page, int) or isinstance(page, bool) or page < 1:
                raise CorpusFormatError(f"line {lineno}: page must be a positive integer")
            if not isinstance(text, str):
                raise CorpusFormatError(f"line {lineno}: text must be a string")
            if (doc_id, page) in seen:
                raise DuplicatePage(f"line {lineno}: duplicate page ({doc_id!r}, {page})")
            seen.add((doc_id, page))
            by_doc.setdefault(doc_id, []).append(Page(number=page, text=text))
    return [
        Document(document_id=doc_id, pages=sorted(pages, key=lambda p: p.number))
        for doc_id, pages in by_doc.items()
    ]


def chunk_document(doc: Document, max_words: int) -> list[Chunk]:
    """Split each page at sentence boundaries into chunks of <= max_words.

    A single sentence longer than the budget is hard-split on word windows.
    Joining the chunk texts of one page reproduces the page text modulo the
    whitespace consumed by splitting.
    """
    if max_words < 50:
        raise ValueError(f"max_words must be >= 50, got {max_words}")
    chunks: list[Chunk] = []
    for page in doc.pages:
        index = 0
        for text in _pack_sentences(page.text, max_words):
            chunks.append(
                Chunk(
                    document_id=doc.document_id,
                    page=page.number,
                    chunk_index=index,
                    text=text,
                    word_count=len(text.split()),
                )
            )
            index += 1
    return chunks


def _pack_sentences(text: str, max_words: int) -> list[str]:
    pieces: list[str] = []
    for sentence in _SENTENCE_SPLIT.split(text):
        sentence = sentence.strip()
        if not sentence:
            continue
        words = sentence.split()
        if len(words) > max_words:
            pieces.extend(
                " ".join(words[i : i + max_words]) for i in range(0, len(words), max_words)
            )
        else:
            pieces.append(" ".join(words))

    packed: list[str] = []
    current: list[str] = []
    current_words = 0
    for piece in pieces:
        count = len(piece.split())
        if current and current_words + count > max_words:
            packed.append(" ".join(current))
            current = []
            current_words = 0
        current.append(piece)
        current_words += count
    if current:
        packed.append(" ".join(current))
    return packed
