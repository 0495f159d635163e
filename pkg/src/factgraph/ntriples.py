"""N-Triples serialization and parsing for the graph.

One line per triple, ``<subjIRI> <predIRI> <objIRI> .``, sorted
lexicographically so equal graphs serialize to identical bytes. Negation is
carried in the predicate IRI as a leading ``not_`` token and folded back
into the flag on parse; provenance and status live in the sidecar file, not
here.
"""

from __future__ import annotations

import re

from .errors import EmptyLabel, ParseError
from .graph import KnowledgeGraph, Triple
from .labels import mint_iri, normalize_label, parse_iri

_LINE_RE = re.compile(r"^<([^<>\s]+)>\s+<([^<>\s]+)>\s+<([^<>\s]+)>\s+\.$")


def triple_line(triple: Triple) -> str:
    subj = mint_iri(triple.subject, "entity")
    pred = mint_iri(normalize_label(triple.query_form()), "relation")
    obj = mint_iri(triple.object, "entity")
    return f"<{subj}> <{pred}> <{obj}> ."


def serialize_ntriples(graph: KnowledgeGraph) -> str:
    lines = sorted(triple_line(t) for t in graph.triples())
    return "".join(line + "\n" for line in lines)


def parse_ntriples(text: str) -> KnowledgeGraph:
    """Rebuild a graph from its serialization.

    Statuses come back pending and provenance empty; the sidecar owns those.
    Raises ParseError with the 1-based line number on malformed lines and
    MalformedIri on IRIs outside the urn scheme.
    """
    graph = KnowledgeGraph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        match = _LINE_RE.match(line)
        if match is None:
            raise ParseError(f"not a triple line: {raw!r}", lineno)
        subject = parse_iri(match.group(1), "entity", lineno)
        predicate = parse_iri(match.group(2), "relation", lineno)
        obj = parse_iri(match.group(3), "entity", lineno)
        try:
            graph.upsert(Triple.create(subject, predicate, obj))
        except EmptyLabel as exc:
            raise ParseError(str(exc), lineno) from None
    return graph
