"""HTTP API over a project store.

Payload builders live at module level so the CLI can emit byte-identical
JSON for the same queries. Reads work off the store's current folded state;
review writes funnel through the store's single-writer lock.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .bench import agreement_stats
from .clients.base import ClientBundle
from .errors import (
    LlmUnavailable,
    NoOverlap,
    PageRankUnavailable,
    ReplayMiss,
    SearchUnavailable,
    UnknownEntity,
    UnknownTripleId,
)
from .graph import Triple, TripleStatus
from .ntriples import serialize_ntriples
from .query import (
    Pattern,
    chat_answer,
    enumerate_paths,
    k_hop,
    match_pattern,
    render_paths_summary,
    render_subgraph_summary,
)
from .store import ProjectStore, ReviewEvent

DEFAULT_PAGE_SIZE = 50
MAX_PAGE_SIZE = 500


# -- payloads shared with the CLI ---------------------------------------------


def triple_payload(store: ProjectStore, triple: Triple) -> dict:
    machine = store.state.machine_outcomes.get(triple.id)
    return {
        "id": triple.id,
        "subject": triple.subject.text,
        "predicate": triple.predicate.text,
        "object": triple.object.text,
        "negated": triple.negated,
        "status": triple.status.value,
        "provenance": [ref.as_dict() for ref in triple.provenance],
        "machine_outcome": machine.value if machine else None,
    }


def stats_payload(store: ProjectStore) -> dict:
    stats = store.state.graph.stats()
    return {
        "triple_count": stats.triple_count,
        "unique_entity_count": stats.unique_entity_count,
        "unique_relation_count": stats.unique_relation_count,
        "status_histogram": stats.status_histogram,
        "candidate_count": store.state.candidate_count,
        "rejected_count": store.state.rejected_count,
        "review_count": len(store.state.latest_reviews),
    }


def triples_page_payload(
    store: ProjectStore, status: str | None, page: int, page_size: int
) -> dict:
    triples = store.state.graph.triples()
    if status:
        wanted = TripleStatus(status)
        triples = [t for t in triples if t.status is wanted]
    total = len(triples)
    start = (page - 1) * page_size
    items = triples[start : start + page_size]
    return {
        "items": [triple_payload(store, t) for t in items],
        "total": total,
        "page": page,
        "page_size": page_size,
    }


def query_payload(store: ProjectStore, subject, predicate, obj) -> dict:
    pattern = Pattern(subject=subject or None, predicate=predicate or None, object=obj or None)
    matches = match_pattern(store.state.graph, pattern)
    return {"items": [triple_payload(store, t) for t in matches], "total": len(matches)}


def khop_payload(store: ProjectStore, source: str, k: int, direction: str) -> dict:
    graph = store.state.graph
    sub = k_hop(graph, source, k, direction)
    return {
        "source": source,
        "k": k,
        "direction": direction,
        "triples": [triple_payload(store, graph.get(tid)) for tid in sorted(sub.triples)],
        "distances": dict(sorted(sub.frontier_distance.items())),
        "summary": render_subgraph_summary(graph, sub, direction),
    }


def paths_payload(
    store: ProjectStore, source: str, target: str, max_hops: int, direction: str
) -> dict:
    graph = store.state.graph
    result = enumerate_paths(graph, source, target, max_hops, direction)
    return {
        "source": source,
        "target": target,
        "max_hops": max_hops,
        "direction": direction,
        "paths": [
            {
                "triples": [triple_payload(store, graph.get(tid)) for tid in path.triple_ids],
                "entities": list(path.entities),
            }
            for path in result.paths
        ],
        "truncated": result.truncated,
        "summary": render_paths_summary(graph, result),
    }


def agreement_payload(store: ProjectStore) -> dict:
    expert = {tid: event.expert_label for tid, event in store.state.latest_reviews.items()}
    try:
        fraction, counts = agreement_stats(store.state.machine_outcomes, expert)
    except NoOverlap:
        return {"agreement": None, "compared": 0, "matches": 0, "excluded": len(expert)}
    return {"agreement": fraction, **counts}


# -- application ----------------------------------------------------------------


class ReviewBody(BaseModel):
    expert_label: str
    reviewer: str
    note: str = ""


class ChatBody(BaseModel):
    question: str


def create_app(store: ProjectStore, clients: ClientBundle | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="factgraph", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed parameters", "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "malformed parameters", "detail": str(exc)})

    @app.exception_handler(UnknownEntity)
    async def _unknown_entity(request: Request, exc: UnknownEntity):
        return JSONResponse(status_code=404, content={"error": "unknown entity", "detail": str(exc)})

    @app.exception_handler(UnknownTripleId)
    async def _unknown_triple(request: Request, exc: UnknownTripleId):
        return JSONResponse(status_code=409, content={"error": "unknown triple", "detail": str(exc)})

    for dep_error in (LlmUnavailable, SearchUnavailable, PageRankUnavailable, ReplayMiss):

        @app.exception_handler(dep_error)
        async def _dependency_down(request: Request, exc: Exception):
            return JSONResponse(status_code=503, content={"error": "dependency unavailable", "detail": str(exc)})

    @app.get("/stats")
    def get_stats():
        return stats_payload(store)

    @app.get("/triples")
    def get_triples(status: str | None = None, page: int = 1, page_size: int = DEFAULT_PAGE_SIZE):
        if page < 1 or page_size < 1:
            raise ValueError("page and page_size must be positive")
        if status is not None:
            try:
                TripleStatus(status)
            except ValueError:
                raise ValueError(f"unknown status: {status}") from None
        return triples_page_payload(store, status, page, min(page_size, MAX_PAGE_SIZE))

    @app.get("/triples/{triple_id}")
    def get_triple(triple_id: str):
        triple = store.state.graph.get(triple_id)
        if triple is None:
            return JSONResponse(status_code=404, content={"error": "unknown triple", "detail": triple_id})
        record = store.state.validation_records.get(triple_id)
        review = store.state.latest_reviews.get(triple_id)
        return {
            "triple": triple_payload(store, triple),
            "validation": record.as_dict() if record else None,
            "review": review.as_dict() if review else None,
        }

    @app.post("/triples/{triple_id}/review")
    def post_review(triple_id: str, body: ReviewBody):
        try:
            label = TripleStatus(body.expert_label)
        except ValueError:
            raise ValueError(f"unknown expert label: {body.expert_label}") from None
        event = store.append_review(
            ReviewEvent(triple_id=triple_id, expert_label=label, reviewer=body.reviewer, note=body.note)
        )
        triple = store.state.graph.get(triple_id)
        return {"review": event.as_dict(), "triple": triple_payload(store, triple)}

    @app.get("/query")
    def get_query(subject: str = "", predicate: str = "", object: str = ""):
        return query_payload(store, subject, predicate, object)

    @app.get("/graph/khop")
    def get_khop(source: str, k: int = 1, direction: str = "both"):
        return khop_payload(store, source, k, direction)

    @app.get("/graph/paths")
    def get_paths(source: str, target: str, max_hops: int = 4, direction: str = "both"):
        return paths_payload(store, source, target, max_hops, direction)

    @app.get("/agreement")
    def get_agreement():
        return agreement_payload(store)

    @app.post("/chat")
    def post_chat(body: ChatBody):
        if clients is None:
            raise LlmUnavailable("no LLM client configured for chat")
        if not body.question.strip():
            raise ValueError("question must be non-empty")
        answer, cited = chat_answer(body.question, store.state.graph, clients.llm)
        return {"answer": answer, "cited_triple_ids": cited}

    @app.get("/export.nt", response_class=PlainTextResponse)
    def get_export():
        return serialize_ntriples(store.published_graph())

    @app.get("/api/spec")
    def get_spec():
        return app.openapi()

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
