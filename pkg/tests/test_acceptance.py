"""Acceptance suite: one test per release criterion, at its stated tolerance.

Each test prints an ``[ACCEPTANCE] <criterion>: PASS`` line when it holds,
so a verbose run doubles as the acceptance checklist.
"""

import itertools
import json
import random
import time

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from factgraph.api import create_app
from factgraph.bench import (
    ConfusionMatrix,
    Correction,
    LabeledTriple,
    NEGATIVE,
    POSITIVE,
    apply_corrections,
    confusion,
    metrics,
)
from factgraph.cli import main as cli_main
from factgraph.extract import CandidateTriple, ExtractionResult, enforce_constraints
from factgraph.graph import KnowledgeGraph, SourceRef, Triple, TripleStatus
from factgraph.ntriples import parse_ntriples, serialize_ntriples
from factgraph.query import Pattern, enumerate_paths, k_hop, match_pattern
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
from factgraph.validate import DasConfig, ValidationRecord, majority_vote, validate_triple

from conftest import DEMO_CORPUS, DEMO_FIXTURES, make_graph, random_graph
from test_bench import metrics_oracle
from test_query import bfs_oracle, paths_oracle, random_entity_graph
from test_validate import make_stack, vote_oracle


def report(name):
    print(f"[ACCEPTANCE] {name}: PASS")


def test_voting_oracle_exhaustive():
    started = time.monotonic()
    for m in range(0, 8):
        for verdicts in itertools.product(["yes", "no"], repeat=m):
            assert majority_vote(list(verdicts), 1) is vote_oracle(list(verdicts), 1)
    assert majority_vote(["yes", "no"], 1) is TripleStatus.NON_FACTUAL  # tie rule
    assert time.monotonic() - started < 1.0
    report("voting oracle: 2^m vectors for m<=7, ties to non-factual, <1s")


def test_threshold_semantics_randomized():
    started = time.monotonic()
    rng = random.Random(90)
    shrank_at_least_once = False
    for _ in range(100):
        entries = [
            (round(rng.uniform(0, 10), 1), "mercury contaminates rivers text")
            for _ in range(rng.randint(0, 10))
        ]
        clients = make_stack(entries, "mercury contaminates rivers")
        low = validate_triple(
            Triple.create("mercury", "contaminates", "rivers"),
            DasConfig(relevance_threshold=7.0),
            clients,
        )
        assert all(p.relevance_score >= 7.0 for p in low.judged_pages)
        high = validate_triple(
            Triple.create("mercury", "contaminates", "rivers"),
            DasConfig(relevance_threshold=9.0),
            clients,
        )
        low_urls = {p.url for p in low.judged_pages}
        high_urls = {p.url for p in high.judged_pages}
        assert high_urls <= low_urls
        if high_urls < low_urls:
            shrank_at_least_once = True
    assert shrank_at_least_once
    assert time.monotonic() - started < 5.0
    report("threshold semantics: nothing below 7.0 judged; raising tau shrinks the set, <5s")


def test_metrics_reconstruction_anchor():
    # arithmetic check of the reconstructed matrix before trusting it
    matrix = ConfusionMatrix(tp=1390, fp=96, fn=448, tn=1742)
    assert matrix.total == 1838 + 1838
    assert abs((1390 + 1742) / 3676 - 0.852) <= 0.001
    precision = 1390 / (1390 + 96)
    recall = 1390 / (1390 + 448)
    assert abs(2 * precision * recall / (precision + recall) - 0.836) <= 0.001

    result = metrics(matrix)
    assert abs(result.accuracy - 0.852) <= 0.001
    assert abs(result.f1 - 0.836) <= 0.001

    rng = random.Random(91)
    tested = 0
    while tested < 1000:
        candidate = ConfusionMatrix(
            tp=rng.randint(0, 80), fp=rng.randint(0, 80), fn=rng.randint(0, 80), tn=rng.randint(0, 80)
        )
        if candidate.total == 0:
            continue
        tested += 1
        got = metrics(candidate)
        accuracy, precision, recall, f1 = metrics_oracle(candidate)
        assert abs(got.accuracy - accuracy) < 1e-9
        assert abs(got.precision - precision) < 1e-9
        assert abs(got.recall - recall) < 1e-9
        assert abs(got.f1 - f1) < 1e-9
    report("metrics reconstruction: anchor matrix within +-0.001; 1000-matrix oracle at 1e-9")


def test_correction_mechanism_quarter_and_inverse():
    dataset = [
        LabeledTriple(triple=Triple.create("s1", "r", "o1"), gold_label=POSITIVE),
        LabeledTriple(triple=Triple.create("s2", "r", "o2"), gold_label=POSITIVE),
        LabeledTriple(triple=Triple.create("s3", "r", "o3"), gold_label=NEGATIVE),
        LabeledTriple(triple=Triple.create("s4", "r", "o4"), gold_label=NEGATIVE),
    ]
    predictions = [
        TripleStatus.FACTUAL,
        TripleStatus.NON_FACTUAL,
        TripleStatus.FACTUAL,
        TripleStatus.NON_FACTUAL,
    ]

    def render(rows):
        result = metrics(confusion([row.gold_label for row in rows], predictions))
        return json.dumps(result.as_dict(), sort_keys=True).encode()

    original = render(dataset)
    before = metrics(confusion([row.gold_label for row in dataset], predictions))
    corrected = apply_corrections(dataset, [Correction(dataset[2].triple.id, POSITIVE, "check")])
    after = metrics(confusion([row.gold_label for row in corrected], predictions))
    assert after.accuracy - before.accuracy == pytest.approx(0.25, abs=0)
    restored = apply_corrections(corrected, [Correction(dataset[2].triple.id, NEGATIVE, "revert")])
    assert render(restored) == original
    report("correction mechanism: one flip moves accuracy by exactly 0.25; inverse restores bytes")


def test_extraction_constraints_generated_sweep():
    rng = random.Random(92)
    words = ["w1", "w2", "w3", "w4"]

    def field(n):
        return " ".join(rng.sample(words, n)) if n else ""

    candidates = []
    expectations = []
    for index in range(10000):
        lengths = (rng.randint(0, 4), rng.randint(0, 4), rng.randint(0, 4))
        candidates.append(
            CandidateTriple(
                subject_raw=field(lengths[0]),
                predicate_raw=field(lengths[1]),
                object_raw=f"{field(lengths[2])}" if lengths[2] else "",
                negated=False,
                source=SourceRef("doc", 1, index),
            )
        )
        expectations.append(all(1 <= n <= 2 for n in lengths))

    accepted, rejected = enforce_constraints(candidates)
    assert len(accepted) + len(rejected) == 10000
    assert len(accepted) == sum(expectations)
    for triple in accepted:
        assert 1 <= triple.subject.word_count <= 2
        assert 1 <= triple.predicate.word_count <= 2
        assert 1 <= triple.object.word_count <= 2
    # order preserved: chunk indexes of accepted candidates strictly increase
    accepted_indexes = [t.provenance[0].chunk_index for t in accepted]
    assert accepted_indexes == sorted(accepted_indexes)
    assert [i for i, keep in enumerate(expectations) if keep] == accepted_indexes
    report("extraction constraints: 10000 generated candidates, exact two-word rule, order kept")


def test_end_to_end_determinism_across_runs_and_parallelism(tmp_path):
    runner = CliRunner()

    def pipeline(tag, parallelism):
        project = tmp_path / f"proj-{tag}"
        for args in (
            ["ingest", str(DEMO_CORPUS)],
            ["extract", "--mode", "fixture", "--fixtures", str(DEMO_FIXTURES),
             "--parallelism", str(parallelism)],
            ["validate", "--mode", "fixture", "--fixtures", str(DEMO_FIXTURES),
             "--parallelism", str(parallelism)],
            ["export", "--out", str(project / "published.nt")],
        ):
            result = runner.invoke(
                cli_main, ["--project", str(project), *args], catch_exceptions=False
            )
            assert result.exit_code == 0, result.output
        return (
            (project / SNAPSHOT_FILE).read_bytes(),
            (project / VALIDATION_FILE).read_bytes(),
            (project / "published.nt").read_bytes(),
        )

    outputs = [
        pipeline(f"{run}-{parallelism}", parallelism)
        for run in range(3)
        for parallelism in (1, 4, 8)
    ]
    assert all(output == outputs[0] for output in outputs[1:])
    assert outputs[0][0]  # non-empty snapshot
    report("end-to-end determinism: byte-identical graph and audit log over 3 runs x {1,4,8} workers")


def test_graph_oracles():
    started = time.monotonic()
    rng = random.Random(93)

    for _ in range(200):
        graph, entities = random_entity_graph(rng, max_entities=30, max_triples=60)
        source = rng.choice([t.subject.text for t in graph.triples()])
        k = rng.randint(0, 4)
        direction = rng.choice(["out", "in", "both"])
        sub = k_hop(graph, source, k, direction)
        oracle_triples, oracle_distances = bfs_oracle(graph, source, k, direction)
        assert sub.triples == oracle_triples
        assert sub.frontier_distance == oracle_distances

    hand_built = [
        make_graph([("a", "r", "b"), ("b", "r", "d"), ("a", "r", "c"), ("c", "r", "d")]),
        make_graph([("a", "r", "b"), ("b", "r", "c"), ("c", "r", "a"), ("a", "q", "c")]),
        make_graph([("a", "r", "b"), ("b", "r", "a")]),
    ]
    checked = 0
    while checked < 100:
        graph, entities = random_entity_graph(rng, max_entities=8, max_triples=14)
        source, target = rng.sample(entities, 2)
        if not (graph.has_entity(source) and graph.has_entity(target)):
            continue
        checked += 1
        max_hops = rng.randint(1, 5)
        direction = rng.choice(["out", "in", "both"])
        result = enumerate_paths(graph, source, target, max_hops, direction)
        assert [p.triple_ids for p in result.paths] == paths_oracle(
            graph, source, target, max_hops, direction
        )
    for graph in hand_built:
        result = enumerate_paths(graph, "a", "b" if graph.has_entity("b") else "c", 4)
        want = paths_oracle(graph, "a", "b" if graph.has_entity("b") else "c", 4, "both")
        assert [p.triple_ids for p in result.paths] == want

    for _ in range(50):
        graph, entities = random_entity_graph(rng, max_entities=10, max_triples=25)
        s, o = rng.choice(entities), rng.choice(entities)
        both = {t.id for t in match_pattern(graph, Pattern(subject=s, object=o))}
        split = {t.id for t in match_pattern(graph, Pattern(subject=s))} & {
            t.id for t in match_pattern(graph, Pattern(object=o))
        }
        assert both == split

    assert time.monotonic() - started < 30.0
    report("graph oracles: k-hop BFS x200, paths DFS incl. diamonds/cycles, pattern intersection, <30s")


def test_round_trip_500_graphs_byte_stable():
    rng = random.Random(94)
    for _ in range(500):
        graph = random_graph(rng)
        text = serialize_ntriples(graph)
        parsed = parse_ntriples(text)
        assert sorted(t.key() for t in parsed.triples()) == sorted(
            t.key() for t in graph.triples()
        )
        assert serialize_ntriples(parsed) == text
        assert serialize_ntriples(graph) == text
    report("round-trip: 500 random graphs preserve the triple multiset; serialization byte-stable")


def test_event_sourced_store_rebuild_and_review_precedence(tmp_path):
    from test_store import build_project, snapshot_bytes

    store = build_project(tmp_path / "proj")
    triples = store.state.graph.triples()
    store.append_review(ReviewEvent(triples[0].id, TripleStatus.EXPERT_FACTUAL, "pat"))
    store.append_review(ReviewEvent(triples[1].id, TripleStatus.EXPERT_NON_FACTUAL, "pat"))
    store.append_review(ReviewEvent(triples[0].id, TripleStatus.EXPERT_NON_FACTUAL, "kim"))

    original = snapshot_bytes(store)
    store.path(SNAPSHOT_FILE).unlink()
    store.path(SIDECAR_FILE).unlink()
    rebuilt = rebuild_store(store.root)
    assert snapshot_bytes(rebuilt) == original
    assert rebuilt.state.graph.get(triples[0].id).status is TripleStatus.EXPERT_NON_FACTUAL

    # interleaving: validation after a review never displaces the expert label
    fresh = open_store(store.root)
    record = ValidationRecord(
        triple_id=triples[0].id, query="q", outcome=TripleStatus.FACTUAL
    )
    fresh.append_validation([record])
    assert fresh.state.graph.get(triples[0].id).status is TripleStatus.EXPERT_NON_FACTUAL
    report("event-sourced store: rebuild byte-identical; latest review wins over validation")


def seed_agreement_project(root):
    """579 reviewed triples, 521 scripted to match the machine outcome."""
    store = ProjectStore(root)
    store.create()
    graph = KnowledgeGraph()
    accepted = []
    for index in range(600):
        triple = Triple.create(
            f"entity{index}", "relates to", f"thing{index}",
            provenance=[SourceRef("seed", 1, index)],
        )
        graph.upsert(triple)
        accepted.append(triple)
    store.save_extraction(ExtractionResult(graph=graph, accepted=accepted))

    records = [
        ValidationRecord(
            triple_id=triple.id,
            query=f"entity{index} relates to thing{index}",
            outcome=TripleStatus.FACTUAL,
            yes_count=1,
        )
        for index, triple in enumerate(accepted)
    ]
    store.append_validation(records)

    for index, triple in enumerate(accepted[:579]):
        label = TripleStatus.EXPERT_FACTUAL if index < 521 else TripleStatus.EXPERT_NON_FACTUAL
        store.append_review(ReviewEvent(triple.id, label, reviewer="expert", note=""))
    return store


def test_agreement_statistic_via_cli_and_api(tmp_path):
    store = seed_agreement_project(tmp_path / "seeded")

    runner = CliRunner()
    result = runner.invoke(
        cli_main, ["--project", str(store.root), "agreement", "--json"], catch_exceptions=False
    )
    assert result.exit_code == 0
    cli_payload = json.loads(result.output)
    assert abs(cli_payload["agreement"] - 0.8998) <= 0.0001
    assert cli_payload["compared"] == 579
    assert cli_payload["matches"] == 521

    client = TestClient(create_app(open_store(store.root)))
    api_payload = client.get("/agreement").json()
    assert abs(api_payload["agreement"] - 0.8998) <= 0.0001
    assert api_payload == cli_payload

    # the seeded project is an integration project too: rebuild must be byte-identical
    original = (
        store.path(SNAPSHOT_FILE).read_bytes(),
        store.path(SIDECAR_FILE).read_bytes(),
    )
    store.path(SNAPSHOT_FILE).unlink()
    store.path(SIDECAR_FILE).unlink()
    rebuilt = rebuild_store(store.root)
    assert (
        rebuilt.path(SNAPSHOT_FILE).read_bytes(),
        rebuilt.path(SIDECAR_FILE).read_bytes(),
    ) == original
    report("agreement statistic: 521/579 reported as 0.8998 +-0.0001 via CLI and GET /agreement")
