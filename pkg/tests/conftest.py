import random
from pathlib import Path

import pytest

from factgraph.clients.fixtures import FixtureTables, build_fixture_bundle
from factgraph.corpus import load_corpus
from factgraph.extract import extract_corpus
from factgraph.graph import KnowledgeGraph, Triple

FIXTURES_DIR = Path(__file__).parent / "fixtures"
DEMO_CORPUS = FIXTURES_DIR / "demo_corpus.jsonl"
DEMO_FIXTURES = FIXTURES_DIR / "demo_fixtures.json"


@pytest.fixture
def demo_bundle():
    return build_fixture_bundle(FixtureTables.load(DEMO_FIXTURES))


@pytest.fixture
def demo_graph(demo_bundle):
    documents = load_corpus(DEMO_CORPUS)
    return extract_corpus(documents, demo_bundle.llm).graph


def make_graph(triples) -> KnowledgeGraph:
    """Build a graph from (s, p, o) or (s, p, o, negated) tuples."""
    graph = KnowledgeGraph()
    for spec in triples:
        negated = spec[3] if len(spec) > 3 else False
        graph.upsert(Triple.create(spec[0], spec[1], spec[2], negated=negated))
    return graph


_WORDS = [
    "mercury", "rivers", "gold", "mining", "forest", "fish", "water",
    "perú", "ñandú", "bio_diversity", "a-b", "x9", "sluice",
    "mercurio", "k'iche", "dredge",
]


def random_label(rng: random.Random) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 2)))


def random_graph(rng: random.Random, max_triples: int = 12) -> KnowledgeGraph:
    graph = KnowledgeGraph()
    for _ in range(rng.randint(0, max_triples)):
        graph.upsert(
            Triple.create(
                random_label(rng),
                random_label(rng),
                random_label(rng),
                negated=rng.random() < 0.25,
            )
        )
    return graph
