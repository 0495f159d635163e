import pytest

from factgraph.clients.fixtures import FixtureTables, build_fixture_bundle
from factgraph.errors import CorruptLog, UnknownTripleId
from factgraph.extract import extract_corpus
from factgraph.graph import TripleStatus
from factgraph.store import (
    REVIEWS_FILE,
    SIDECAR_FILE,
    SNAPSHOT_FILE,
    VALIDATION_FILE,
    ProjectStore,
    ReviewEvent,
    open_store,
    rebuild_store,
)
from factgraph.validate import DasConfig, validate_batch

from conftest import DEMO_CORPUS, DEMO_FIXTURES


def build_project(root, validated=True):
    store = ProjectStore(root)
    documents = store.ingest(DEMO_CORPUS)
    bundle = build_fixture_bundle(FixtureTables.load(DEMO_FIXTURES))
    result = extract_corpus(documents, bundle.llm)
    store.save_extraction(result)
    if validated:
        pending = [t for t in store.state.graph.triples() if t.status is TripleStatus.PENDING]
        store.append_validation(validate_batch(pending, DasConfig(), bundle))
    return store


def snapshot_bytes(store):
    return (
        store.path(SNAPSHOT_FILE).read_bytes(),
        store.path(SIDECAR_FILE).read_bytes(),
    )


def test_extraction_persists_and_folds(tmp_path):
    store = build_project(tmp_path / "p", validated=False)
    assert len(store.state.graph) == 6
    assert store.state.candidate_count == 8
    assert store.state.rejected_count == 1
    assert all(t.status is TripleStatus.PENDING for t in store.state.graph.triples())


def test_validation_statuses_applied(tmp_path):
    store = build_project(tmp_path / "p")
    histogram = store.state.graph.stats().status_histogram
    assert histogram["factual"] == 4
    assert histogram["non-factual"] == 1
    assert histogram["unverifiable"] == 1


def test_review_overrides_machine_status(tmp_path):
    store = build_project(tmp_path / "p")
    factual = next(t for t in store.state.graph.triples() if t.status is TripleStatus.FACTUAL)
    store.append_review(
        ReviewEvent(factual.id, TripleStatus.EXPERT_NON_FACTUAL, reviewer="pat")
    )
    assert store.state.graph.get(factual.id).status is TripleStatus.EXPERT_NON_FACTUAL
    assert store.state.machine_outcomes[factual.id] is TripleStatus.FACTUAL


def test_latest_review_wins(tmp_path):
    store = build_project(tmp_path / "p")
    triples = store.state.graph.triples()
    target = triples[0]
    other = triples[1]
    store.append_review(ReviewEvent(target.id, TripleStatus.EXPERT_FACTUAL, "a"))
    store.append_review(ReviewEvent(other.id, TripleStatus.EXPERT_FACTUAL, "a"))
    store.append_review(ReviewEvent(target.id, TripleStatus.EXPERT_NON_FACTUAL, "b"))
    assert store.state.graph.get(target.id).status is TripleStatus.EXPERT_NON_FACTUAL
    reloaded = open_store(store.root)
    assert reloaded.state.graph.get(target.id).status is TripleStatus.EXPERT_NON_FACTUAL


def test_review_unknown_triple_rejected(tmp_path):
    store = build_project(tmp_path / "p")
    with pytest.raises(UnknownTripleId):
        store.append_review(ReviewEvent("ffffffffffffffff", TripleStatus.EXPERT_FACTUAL, "a"))


def test_rebuild_restores_deleted_snapshot(tmp_path):
    store = build_project(tmp_path / "p")
    store.append_review(
        ReviewEvent(store.state.graph.triples()[0].id, TripleStatus.EXPERT_FACTUAL, "pat")
    )
    original = snapshot_bytes(store)
    store.path(SNAPSHOT_FILE).unlink()
    store.path(SIDECAR_FILE).unlink()
    rebuilt = rebuild_store(store.root)
    assert snapshot_bytes(rebuilt) == original


def test_rebuild_idempotent(tmp_path):
    store = build_project(tmp_path / "p")
    first = snapshot_bytes(rebuild_store(store.root))
    second = snapshot_bytes(rebuild_store(store.root))
    assert first == second


def test_interleaved_validate_review_review_wins(tmp_path):
    store = build_project(tmp_path / "p", validated=False)
    bundle = build_fixture_bundle(FixtureTables.load(DEMO_FIXTURES))
    target = store.state.graph.triples()[2]
    store.append_review(ReviewEvent(target.id, TripleStatus.EXPERT_NON_FACTUAL, "pat"))
    pending = [t for t in store.state.graph.triples() if t.status is TripleStatus.PENDING]
    store.append_validation(validate_batch(pending, DasConfig(), bundle))
    assert store.state.graph.get(target.id).status is TripleStatus.EXPERT_NON_FACTUAL
    # refold from logs agrees with the live view
    assert open_store(store.root).state.graph.get(target.id).status is TripleStatus.EXPERT_NON_FACTUAL


def test_empty_review_log_keeps_validation_statuses(tmp_path):
    store = build_project(tmp_path / "p")
    reloaded = open_store(store.root)
    assert reloaded.state.graph.stats().status_histogram == store.state.graph.stats().status_histogram


def test_corrupt_log_reports_line(tmp_path):
    store = build_project(tmp_path / "p")
    with open(store.path(VALIDATION_FILE), "a", encoding="utf-8") as handle:
        handle.write("{not json\n")
    with pytest.raises(CorruptLog):
        rebuild_store(store.root)


def test_published_graph_is_factual_only(tmp_path):
    store = build_project(tmp_path / "p")
    published = store.published_graph()
    assert len(published) == 4
    assert all(t.status is TripleStatus.FACTUAL for t in published.triples())
    non_factual = next(
        t for t in store.state.graph.triples() if t.status is TripleStatus.NON_FACTUAL
    )
    store.append_review(ReviewEvent(non_factual.id, TripleStatus.EXPERT_FACTUAL, "pat"))
    assert len(store.published_graph()) == 5


def test_sidecar_carries_provenance_and_outcomes(tmp_path):
    import json

    store = build_project(tmp_path / "p")
    rows = [
        json.loads(line)
        for line in store.path(SIDECAR_FILE).read_text(encoding="utf-8").splitlines()
    ]
    assert len(rows) == 6
    assert [r["triple_id"] for r in rows] == sorted(r["triple_id"] for r in rows)
    merged = next(r for r in rows if len(r["provenance"]) == 2)
    assert merged["subject"] == "mercury"
    assert all(r["machine_outcome"] in ("factual", "non-factual", "unverifiable") for r in rows)
