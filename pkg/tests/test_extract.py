import random

import pytest

from factgraph.clients.fixtures import FixtureLlm
from factgraph.corpus import Chunk, load_corpus
from factgraph.errors import LlmMalformedOutput
from factgraph.extract import (
    CandidateTriple,
    enforce_constraints,
    extract_candidates,
    extract_corpus,
    parse_extraction_table,
    strip_negation,
)
from factgraph.graph import SourceRef
from factgraph.prompts import build_extraction_prompt

from conftest import DEMO_CORPUS

SRC = SourceRef("doc", 1, 0)


def make_chunk(text, document_id="doc", page=1, index=0):
    return Chunk(
        document_id=document_id,
        page=page,
        chunk_index=index,
        text=text,
        word_count=len(text.split()),
    )


def candidate(subject, predicate, obj, negated=False):
    return CandidateTriple(
        subject_raw=subject, predicate_raw=predicate, object_raw=obj, negated=negated, source=SRC
    )


class ScriptedLlm:
    """Returns queued replies in order, recording the prompts it saw."""

    def __init__(self, replies):
        self.replies = list(replies)
        self.prompts = []

    def complete(self, prompt):
        self.prompts.append(prompt)
        return self.replies.pop(0)


# -- prompt -------------------------------------------------------------------


def test_prompt_instantiates_every_instruction():
    prompt = build_extraction_prompt("Some text.")
    for phrase in (
        "nouns",
        "pronouns",
        "maximum of two words",
        "preposition",
        "negation",
        "order",
        "Some text.",
    ):
        assert phrase in prompt


# -- table parsing ---------------------------------------------------------------


def test_parse_single_row():
    rows = parse_extraction_table("mercury | contaminates | rivers", SRC)
    assert len(rows) == 1
    assert (rows[0].subject_raw, rows[0].predicate_raw, rows[0].object_raw) == (
        "mercury",
        "contaminates",
        "rivers",
    )
    assert rows[0].negated is False


def test_parse_skips_header_and_ruling():
    reply = "Subject | Predicate | Object\n| --- | --- | --- |\na | r | b\nc | q | d"
    rows = parse_extraction_table(reply, SRC)
    assert len(rows) == 2


def test_parse_negated_predicate():
    rows = parse_extraction_table("a | not restore | b", SRC)
    assert rows[0].negated is True
    assert rows[0].predicate_raw == "restore"


def test_parse_tolerates_markdown_edges_and_bad_rows():
    reply = "| a | r | b |\nnot a row at all\nx | y\n c | s | d "
    rows = parse_extraction_table(reply, SRC)
    assert [(r.subject_raw, r.object_raw) for r in rows] == [("a", "b"), ("c", "d")]


def test_parse_fully_malformed_is_empty():
    assert parse_extraction_table("no table here", SRC) == []


def test_strip_negation_variants():
    assert strip_negation("not restore") == ("restore", True)
    assert strip_negation("Not Restore") == ("Restore", True)
    assert strip_negation("not not harm") == ("harm", True)
    assert strip_negation("not") == ("not", False)
    assert strip_negation("restore") == ("restore", False)


# -- constraint enforcement -------------------------------------------------------


def test_two_word_boundary_accepted():
    accepted, rejected = enforce_constraints(
        [candidate("mercury contamination", "harms", "human health")]
    )
    assert len(accepted) == 1 and not rejected


def test_three_word_subject_rejected():
    accepted, rejected = enforce_constraints(
        [candidate("artisanal gold mining", "causes", "deforestation")]
    )
    assert not accepted
    assert rejected[0].rejection_reason == "subject exceeds two words"


def test_negation_token_excluded_from_count():
    accepted, rejected = enforce_constraints([candidate("a", "not fully restore", "b")])
    assert not rejected
    triple = accepted[0]
    assert triple.negated is True
    assert triple.predicate.text == "fully restore"


def test_empty_fields_rejected():
    accepted, rejected = enforce_constraints(
        [candidate("", "r", "b"), candidate("a", " ", "b"), candidate("a", "r", "")]
    )
    assert not accepted
    assert [r.rejection_reason for r in rejected] == [
        "empty subject",
        "empty predicate",
        "empty object",
    ]


def test_enforcement_preserves_order():
    candidates = [
        candidate("a", "r", "b"),
        candidate("too long subject here", "r", "b"),
        candidate("c", "q", "d"),
    ]
    accepted, rejected = enforce_constraints(candidates)
    assert [t.subject.text for t in accepted] == ["a", "c"]
    assert [r.subject_raw for r in rejected] == ["too long subject here"]


def test_enforcement_never_accepts_overlong_or_empty():
    """Exhaustive-style sweep over generated candidates with 0-4 word fields."""
    rng = random.Random(75)
    words = ["w1", "w2", "w3", "w4"]

    def field(n):
        return " ".join(rng.sample(words, n)) if n else ""

    for _ in range(2000):
        lengths = [rng.randint(0, 4) for _ in range(3)]
        item = candidate(field(lengths[0]), field(lengths[1]), field(lengths[2]))
        accepted, rejected = enforce_constraints([item])
        should_accept = all(1 <= n <= 2 for n in lengths)
        assert bool(accepted) == should_accept
        assert bool(rejected) != should_accept


# -- chunk extraction ----------------------------------------------------------------


def test_extract_direct_svo_via_fixture():
    rows = extract_candidates(make_chunk("Mercury contaminates rivers."), FixtureLlm())
    assert [(r.subject_raw, r.predicate_raw, r.object_raw, r.negated) for r in rows] == [
        ("Mercury", "contaminates", "rivers", False)
    ]


def test_extract_negation_via_fixture():
    rows = extract_candidates(make_chunk("Mining does not restore forests."), FixtureLlm())
    assert [(r.subject_raw, r.predicate_raw, r.object_raw, r.negated) for r in rows] == [
        ("Mining", "restore", "forests", True)
    ]


def test_extract_replaces_pronoun_with_previous_noun():
    rows = extract_candidates(make_chunk("Miners use mercury. It poisons fish."), FixtureLlm())
    assert rows[1].subject_raw == "mercury"


def test_candidates_carry_chunk_source():
    chunk = make_chunk("Mercury contaminates rivers.", document_id="wwf", page=7, index=2)
    rows = extract_candidates(chunk, FixtureLlm())
    assert rows[0].source == SourceRef("wwf", 7, 2)


def test_unparseable_reply_retried_then_fails():
    llm = ScriptedLlm(["garbage", "still garbage"])
    with pytest.raises(LlmMalformedOutput):
        extract_candidates(make_chunk("text."), llm)
    assert len(llm.prompts) == 2


def test_retry_succeeds_on_second_reply():
    llm = ScriptedLlm(["garbage", "a | r | b"])
    rows = extract_candidates(make_chunk("text."), llm)
    assert len(rows) == 1


def test_header_only_reply_is_legitimately_empty():
    llm = ScriptedLlm(["Subject | Predicate | Object"])
    assert extract_candidates(make_chunk("text."), llm) == []
    assert len(llm.prompts) == 1


# -- corpus driver ----------------------------------------------------------------------


def test_extract_corpus_counts_and_dedup():
    documents = load_corpus(DEMO_CORPUS)
    result = extract_corpus(documents, FixtureLlm())
    assert result.candidate_count == 8
    assert len(result.accepted) == 7
    assert result.merged_count == 1
    assert len(result.rejected) == 1
    assert len(result.graph) == 6


def test_extract_corpus_identical_across_parallelism():
    documents = load_corpus(DEMO_CORPUS)
    baseline = extract_corpus(documents, FixtureLlm(), parallelism=1)
    for workers in (4, 8):
        result = extract_corpus(documents, FixtureLlm(), parallelism=workers)
        assert [t.key() for t in result.graph.triples()] == [
            t.key() for t in baseline.graph.triples()
        ]
        assert [
            (t.id, [tuple(r.as_dict().values()) for r in t.provenance])
            for t in result.graph.triples()
        ] == [
            (t.id, [tuple(r.as_dict().values()) for r in t.provenance])
            for t in baseline.graph.triples()
        ]


def test_failed_chunk_recorded_and_pipeline_continues():
    class FlakyLlm:
        def __init__(self):
            self.inner = FixtureLlm()

        def complete(self, prompt):
            if "Broken sentence" in prompt:
                return "no table"
            return self.inner.complete(prompt)

    documents = load_corpus(DEMO_CORPUS)
    documents[0].pages[0] = type(documents[0].pages[0])(1, "Broken sentence")
    result = extract_corpus(documents, FlakyLlm())
    assert len(result.failed_chunks) == 1
    assert result.failed_chunks[0]["document_id"] == "wwf-healthy-rivers"
    assert len(result.graph) > 0
