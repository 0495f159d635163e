import json
import random

import pytest

from factgraph.corpus import Document, Page, chunk_document, load_corpus
from factgraph.errors import CorpusFormatError, DuplicatePage

from conftest import DEMO_CORPUS


def write_corpus(tmp_path, records):
    path = tmp_path / "corpus.jsonl"
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


def test_load_assembles_document_pages(tmp_path):
    path = write_corpus(
        tmp_path,
        [
            {"document_id": "wwf", "page": 2, "text": "second"},
            {"document_id": "wwf", "page": 1, "text": "first"},
        ],
    )
    documents = load_corpus(path)
    assert len(documents) == 1
    assert [p.number for p in documents[0].pages] == [1, 2]
    assert [p.text for p in documents[0].pages] == ["first", "second"]


def test_missing_text_field_raises(tmp_path):
    path = write_corpus(tmp_path, [{"document_id": "wwf", "page": 1}])
    with pytest.raises(CorpusFormatError):
        load_corpus(path)


def test_bad_page_number_raises(tmp_path):
    path = write_corpus(tmp_path, [{"document_id": "wwf", "page": 0, "text": "x"}])
    with pytest.raises(CorpusFormatError):
        load_corpus(path)


def test_duplicate_page_raises(tmp_path):
    path = write_corpus(
        tmp_path,
        [
            {"document_id": "wwf", "page": 1, "text": "a"},
            {"document_id": "wwf", "page": 1, "text": "b"},
        ],
    )
    with pytest.raises(DuplicatePage):
        load_corpus(path)


def test_multi_document_corpus():
    documents = load_corpus(DEMO_CORPUS)
    assert len(documents) == 2
    assert sum(len(d.pages) for d in documents) == 3


def test_single_chunk_when_page_fits():
    doc = Document("d", [Page(1, "one two three. four five.")])
    chunks = chunk_document(doc, 600)
    assert len(chunks) == 1
    assert chunks[0].word_count == 5


def test_chunks_respect_word_bound():
    sentences = " ".join(f"w{i} w{i} w{i} w{i} w{i}." for i in range(100))  # 500 words
    doc = Document("d", [Page(1, sentences)])
    chunks = chunk_document(doc, 250)
    assert 2 <= len(chunks) <= 3
    assert all(c.word_count <= 250 for c in chunks)


def test_oversized_sentence_is_hard_split():
    doc = Document("d", [Page(1, " ".join(f"w{i}" for i in range(130)))])
    chunks = chunk_document(doc, 50)
    assert all(c.word_count <= 50 for c in chunks)
    assert sum(c.word_count for c in chunks) == 130


def test_min_chunk_size_enforced():
    with pytest.raises(ValueError):
        chunk_document(Document("d", [Page(1, "x.")]), 10)


def test_chunk_indexes_are_per_page():
    doc = Document("d", [Page(1, "a b. c d."), Page(2, "e f.")])
    chunks = chunk_document(doc, 50)
    by_page = {}
    for chunk in chunks:
        by_page.setdefault(chunk.page, []).append(chunk.chunk_index)
    for indexes in by_page.values():
        assert indexes == list(range(len(indexes)))


def test_chunking_preserves_words_property():
    """words(page) == concatenation of words(chunks), for random pages."""
    rng = random.Random(74)
    vocabulary = ["alpha", "beta", "gamma", "delta", "rio", "mina"]
    for _ in range(100):
        words = []
        for _ in range(rng.randint(0, 40)):
            words.append(rng.choice(vocabulary) + ("." if rng.random() < 0.2 else ""))
        page_text = " ".join(words)
        doc = Document("d", [Page(1, page_text)])
        chunks = chunk_document(doc, rng.choice([50, 60, 100]))
        chunk_words = [w for c in chunks for w in c.text.split()]
        assert chunk_words == page_text.split()
