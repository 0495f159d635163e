"""Downstream graph tasks: pattern queries, k-hop, paths, summaries, chat.

All operations are read-only over a graph snapshot. Traversal treats triples
as edges; direction defaults to "both" since relation semantics are mixed.
Path enumeration is bounded by hop and count caps, surfaced as an explicit
truncation flag, never silently.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .errors import UnknownEntity
from .graph import KnowledgeGraph, Triple
from .labels import normalize_label
from .prompts import build_chat_prompt, build_summarize_prompt

_WORD_RE = re.compile(r"\w+")

DIRECTIONS = ("out", "in", "both")
DEFAULT_MAX_HOPS_CEILING = 6
DEFAULT_PATH_CAP = 1000


@dataclass(frozen=True)
class Pattern:
    """A query with any subset of subject/predicate/object pinned."""

    subject: str | None = None
    predicate: str | None = None
    object: str | None = None

    def __post_init__(self):
        if self.subject is None and self.predicate is None and self.object is None:
            raise ValueError("pattern must pin at least one field")


@dataclass
class Subgraph:
    triples: set[str] = field(default_factory=set)
    frontier_distance: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Path:
    triple_ids: tuple[str, ...]
    entities: tuple[str, ...]  # visited entity labels, source..target

    def __len__(self) -> int:
        return len(self.triple_ids)


@dataclass
class PathQueryResult:
    paths: list[Path] = field(default_factory=list)
    truncated: bool = False


def match_pattern(graph: KnowledgeGraph, pattern: Pattern) -> list[Triple]:
    """All triples matching every pinned field exactly, sorted by id."""
    candidate_sets: list[set[str]] = []
    if pattern.subject is not None:
        candidate_sets.append(graph.subject_index.get(normalize_label(pattern.subject).text, set()))
    if pattern.predicate is not None:
        candidate_sets.append(
            graph.predicate_index.get(normalize_label(pattern.predicate).text, set())
        )
    if pattern.object is not None:
        candidate_sets.append(graph.object_index.get(normalize_label(pattern.object).text, set()))
    ids = set.intersection(*candidate_sets) if candidate_sets else set()
    return [graph.get(tid) for tid in sorted(ids)]


def _edges_from(graph: KnowledgeGraph, entity: str, direction: str) -> list[tuple[str, str]]:
    """(triple_id, neighbor_label) pairs incident to ``entity``, sorted by id."""
    edges: list[tuple[str, str]] = []
    if direction in ("out", "both"):
        for tid in graph.subject_index.get(entity, ()):
            edges.append((tid, graph.get(tid).object.text))
    if direction in ("in", "both"):
        for tid in graph.object_index.get(entity, ()):
            edges.append((tid, graph.get(tid).subject.text))
    edges.sort()
    return edges


def k_hop(graph: KnowledgeGraph, source: str, k: int, direction: str = "both") -> Subgraph:
    """Breadth-first neighborhood: every triple traversed within k hops.

    A triple joins the subgraph when its direction-appropriate near endpoint
    sits at distance < k; all touched entities get recorded distances <= k.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    if k < 0:
        raise ValueError("k must be >= 0")
    label = normalize_label(source).text
    if not graph.has_entity(label):
        raise UnknownEntity(source)
    sub = Subgraph(frontier_distance={label: 0})
    queue: deque[str] = deque([label])
    while queue:
        entity = queue.popleft()
        distance = sub.frontier_distance[entity]
        if distance >= k:
            continue
        for tid, neighbor in _edges_from(graph, entity, direction):
            sub.triples.add(tid)
            if neighbor not in sub.frontier_distance:
                sub.frontier_distance[neighbor] = distance + 1
                queue.append(neighbor)
    return sub


def enumerate_paths(
    graph: KnowledgeGraph,
    source: str,
    target: str,
    max_hops: int,
    direction: str = "both",
    max_hops_ceiling: int = DEFAULT_MAX_HOPS_CEILING,
    path_cap: int = DEFAULT_PATH_CAP,
) -> PathQueryResult:
    """All simple paths from source to target, shortest first.

    Ties at one length are ordered lexicographically by triple-id sequence.
    Enumeration stops at ``path_cap`` results with the truncated flag set.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    if max_hops < 1:
        raise ValueError("max_hops must be positive")
    if max_hops > max_hops_ceiling:
        raise ValueError(f"max_hops exceeds the ceiling of {max_hops_ceiling}")
    src = normalize_label(source).text
    dst = normalize_label(target).text
    if src == dst:
        raise ValueError("source and target must differ")
    for label, name in ((src, source), (dst, target)):
        if not graph.has_entity(label):
            raise UnknownEntity(name)

    result = PathQueryResult()
    # iterative deepening: exact length L per round gives shortest-first
    # order, with lexicographic ties from the sorted edge scan
    for length in range(1, max_hops + 1):
        if result.truncated:
            break
        stack: list[tuple[str, tuple[str, ...], tuple[str, ...]]] = [(src, (), (src,))]
        while stack and not result.truncated:
            entity, trail, visited = stack.pop()
            depth = len(trail)
            children: list[tuple[str, tuple[str, ...], tuple[str, ...]]] = []
            for tid, neighbor in _edges_from(graph, entity, direction):
                if neighbor in visited:
                    continue
                if neighbor == dst:
                    if depth + 1 == length:
                        result.paths.append(
                            Path(triple_ids=trail + (tid,), entities=visited + (dst,))
                        )
                        if len(result.paths) >= path_cap:
                            result.truncated = True
                            break
                    continue  # never pass through the target
                if depth + 1 < length:
                    children.append((neighbor, trail + (tid,), visited + (neighbor,)))
            # reversed so the lexicographically smallest child pops first
            stack.extend(reversed(children))
    return result


def _hop_of(triple: Triple, distances: dict[str, int], direction: str) -> int:
    candidates = []
    if direction in ("out", "both") and triple.subject.text in distances:
        candidates.append(distances[triple.subject.text])
    if direction in ("in", "both") and triple.object.text in distances:
        candidates.append(distances[triple.object.text])
    return min(candidates) + 1 if candidates else 1


def render_subgraph_summary(
    graph: KnowledgeGraph, sub: Subgraph, direction: str = "both", llm=None
) -> str:
    """One sentence per triple, grouped by hop distance.

    Passing an LLM swaps the deterministic template for a paraphrase of it.
    """
    if not sub.triples:
        return "No statements within k hops."
    by_hop: dict[int, list[str]] = {}
    for tid in sorted(sub.triples):
        triple = graph.get(tid)
        hop = _hop_of(triple, sub.frontier_distance, direction)
        by_hop.setdefault(hop, []).append(triple.sentence())
    sections = []
    for hop in sorted(by_hop):
        sentences = "\n".join(by_hop[hop])
        sections.append(f"Hop {hop}:\n{sentences}")
    text = "\n\n".join(sections)
    if llm is not None:
        return llm.complete(build_summarize_prompt(text))
    return text


def render_paths_summary(graph: KnowledgeGraph, result: PathQueryResult, llm=None) -> str:
    """Numbered path sections, one sentence per traversed triple."""
    if not result.paths:
        return "No path found within the hop limit."
    sections = []
    for index, path in enumerate(result.paths, start=1):
        sentences = "\n".join(graph.get(tid).sentence() for tid in path.triple_ids)
        sections.append(f"Path {index} ({len(path)} hops):\n{sentences}")
    text = "\n\n".join(sections)
    if result.truncated:
        text += "\n\n(result truncated at the path cap)"
    if llm is not None:
        return llm.complete(build_summarize_prompt(text))
    return text


def retrieve_triples(graph: KnowledgeGraph, question: str, budget: int) -> list[Triple]:
    """Rank triples by shared normalized keyword count; ties by id."""
    question_tokens = set(_WORD_RE.findall(question.lower()))
    scored: list[tuple[int, str]] = []
    for triple in graph.triples():
        tokens = set(_WORD_RE.findall(build_chat_text(triple)))
        overlap = len(question_tokens & tokens)
        if overlap > 0:
            scored.append((-overlap, triple.id))
    scored.sort()
    return [graph.get(tid) for _, tid in scored[:budget]]


def build_chat_text(triple: Triple) -> str:
    return f"{triple.subject.text} {triple.query_form()} {triple.object.text}"


def chat_answer(
    question: str,
    graph: KnowledgeGraph,
    llm,
    retrieval_budget: int = 10,
) -> tuple[str, list[str]]:
    """Answer a question from keyword-retrieved triples; cite what was used."""
    retrieved = retrieve_triples(graph, question, retrieval_budget)
    if not retrieved:
        return "No supporting statements found in the graph.", []
    statements = [t.sentence() for t in retrieved]
    answer = llm.complete(build_chat_prompt(statements, question))
    return answer, [t.id for t in retrieved]
