"""Search-backed factual validation with per-page verdicts and majority voting.

For one triple: build a query from its three labels, retrieve the top hits,
keep only pages whose domain authority clears the relevance threshold, ask
the LLM for a yes/no verdict per page, and vote. Any stage failure degrades
to an ``unverifiable`` outcome with the failing stage recorded; nothing in
this module ever overwrites an expert label.
"""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from urllib.parse import urlparse

from .clients.base import ClientBundle, SearchHit
from .errors import (
    FetchFailure,
    LlmUnavailable,
    PageRankUnavailable,
    RateLimited,
    SearchUnavailable,
    VerdictUnparseable,
)
from .graph import EXPERT_LABELS, Triple, TripleStatus
from .prompts import build_judge_prompt, build_summarize_prompt

logger = logging.getLogger(__name__)

_WORD_RE = re.compile(r"\w+")

DEFAULT_RELEVANCE_THRESHOLD = 7.0


@dataclass(frozen=True)
class DasConfig:
    """Validation pipeline knobs.

    n_hits: search results requested per triple. k_pages: pages judged after
    the relevance filter. relevance_threshold: minimum 0-10 domain score for
    a page to be considered. min_evidence: fewest verdicts needed before the
    vote counts; below it the triple is unverifiable.
    """

    n_hits: int = 10
    k_pages: int = 5
    relevance_threshold: float = DEFAULT_RELEVANCE_THRESHOLD
    min_evidence: int = 1
    page_word_budget: int = 2000
    judge_mode: str = "truncate"  # or "summarize"

    def __post_init__(self):
        if self.n_hits < 1 or self.k_pages < 1 or self.min_evidence < 1:
            raise ValueError("n_hits, k_pages, and min_evidence must be positive")
        if self.k_pages > self.n_hits:
            raise ValueError("k_pages must not exceed n_hits")
        if self.min_evidence > self.k_pages:
            raise ValueError("min_evidence must not exceed k_pages")
        if not 0.0 <= self.relevance_threshold <= 10.0:
            raise ValueError("relevance_threshold must lie in [0, 10]")
        if self.judge_mode not in ("truncate", "summarize"):
            raise ValueError(f"unknown judge_mode: {self.judge_mode}")


@dataclass(frozen=True)
class EvidencePage:
    url: str
    relevance_score: float
    content: str = ""
    verdict: str | None = None  # "yes" | "no"
    reason: str = ""


@dataclass
class ValidationRecord:
    """Audit trail for one triple's validation run."""

    triple_id: str
    query: str
    hits: list[SearchHit] = field(default_factory=list)
    judged_pages: list[EvidencePage] = field(default_factory=list)
    yes_count: int = 0
    no_count: int = 0
    outcome: TripleStatus = TripleStatus.UNVERIFIABLE
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "triple_id": self.triple_id,
            "query": self.query,
            "hits": [hit.as_dict() for hit in self.hits],
            "judged_pages": [
                {
                    "url": page.url,
                    "relevance_score": page.relevance_score,
                    "verdict": page.verdict,
                    "reason": page.reason,
                }
                for page in self.judged_pages
            ],
            "yes_count": self.yes_count,
            "no_count": self.no_count,
            "outcome": self.outcome.value,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ValidationRecord":
        return cls(
            triple_id=data["triple_id"],
            query=data["query"],
            hits=[SearchHit(**h) for h in data.get("hits", [])],
            judged_pages=[
                EvidencePage(
                    url=p["url"],
                    relevance_score=p["relevance_score"],
                    verdict=p.get("verdict"),
                    reason=p.get("reason", ""),
                )
                for p in data.get("judged_pages", [])
            ],
            yes_count=data.get("yes_count", 0),
            no_count=data.get("no_count", 0),
            outcome=TripleStatus(data.get("outcome", "unverifiable")),
            notes=list(data.get("notes", [])),
        )


def build_query(triple: Triple) -> str:
    """``subject predicate object``, with ``not`` surfaced for negated triples."""
    return f"{triple.subject.text} {triple.query_form()} {triple.object.text}"


def retrieve_evidence(query: str, search, config: DasConfig) -> list[SearchHit]:
    """Top-N hits in engine order, dropping hits that share no query keyword.

    Duplicate URLs keep their first occurrence only.
    """
    hits = search.search(query, config.n_hits)
    keywords = set(_WORD_RE.findall(query.lower()))
    kept: list[SearchHit] = []
    seen_urls: set[str] = set()
    for hit in hits[: config.n_hits]:
        if not hit.url or hit.url in seen_urls:
            continue
        hit_tokens = set(_WORD_RE.findall(f"{hit.title} {hit.snippet}".lower()))
        if keywords & hit_tokens:
            kept.append(hit)
            seen_urls.add(hit.url)
    return kept


def domain_of(url: str) -> str:
    netloc = urlparse(url).netloc.lower()
    if "@" in netloc:
        netloc = netloc.rsplit("@", 1)[1]
    netloc = netloc.split(":", 1)[0]
    if netloc.startswith("www."):
        netloc = netloc[4:]
    return netloc


def score_and_filter(
    hits: list[SearchHit],
    pagerank,
    fetcher,
    config: DasConfig,
    notes: list[str] | None = None,
) -> list[EvidencePage]:
    """Relevance-filter hits and fetch content for the survivors.

    Domains are scored on [0, 10]; hits below the threshold are dropped,
    survivors are ordered score-descending (ties keep hit order) and
    truncated to the top K. A failed fetch drops that page; a failed score
    counts as 0 and is recorded as a degradation.
    """
    notes = notes if notes is not None else []
    scored: list[tuple[float, int, SearchHit]] = []
    for index, hit in enumerate(hits):
        domain = domain_of(hit.url)
        try:
            score = float(pagerank.page_rank(domain))
        except (PageRankUnavailable, RateLimited) as exc:
            notes.append(f"page-rank unavailable for {domain}: scored 0 ({exc})")
            score = 0.0
        score = min(10.0, max(0.0, score))
        if score >= config.relevance_threshold:
            scored.append((score, index, hit))
    scored.sort(key=lambda item: (-item[0], item[1]))

    pages: list[EvidencePage] = []
    for score, _, hit in scored[: config.k_pages]:
        try:
            content = fetcher.fetch(hit.url)
        except FetchFailure as exc:
            notes.append(f"fetch failed, page dropped: {hit.url} ({exc})")
            continue
        words = content.split()
        if len(words) > config.page_word_budget:
            content = " ".join(words[: config.page_word_budget])
        pages.append(EvidencePage(url=hit.url, relevance_score=score, content=content))
    return pages


def judge_page(triple: Triple, page: EvidencePage, llm, config: DasConfig | None = None) -> EvidencePage:
    """Ask the LLM whether the page supports the triple; parse yes/no + reason."""
    reference = page.content
    if config is not None and config.judge_mode == "summarize":
        reference = llm.complete(build_summarize_prompt(page.content))
    reply = llm.complete(build_judge_prompt(build_query(triple), reference))
    verdict, reason = _parse_verdict(reply)
    return replace(page, verdict=verdict, reason=reason)


def _parse_verdict(reply: str) -> tuple[str, str]:
    for raw in reply.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, _, tail = line.partition("|")
        token = head.strip().strip(".:").lower()
        if token in ("yes", "no"):
            reason = tail.strip()
            return token, reason or "(no reason provided)"
    raise VerdictUnparseable(f"no yes/no verdict in reply: {reply[:120]!r}")


def majority_vote(verdicts: list[str], min_evidence: int) -> TripleStatus:
    """Vote the per-page verdicts into one outcome; ties go to non-factual."""
    if len(verdicts) < min_evidence:
        return TripleStatus.UNVERIFIABLE
    yes = sum(1 for v in verdicts if v == "yes")
    no = len(verdicts) - yes
    if yes > no:
        return TripleStatus.FACTUAL
    return TripleStatus.NON_FACTUAL


def validate_triple(triple: Triple, config: DasConfig, clients: ClientBundle) -> ValidationRecord:
    """Run the full per-triple pipeline and return its audit record.

    The triple's status moves from pending to the outcome; expert labels and
    already-set machine statuses are left untouched.
    """
    record = ValidationRecord(triple_id=triple.id, query=build_query(triple))
    try:
        record.hits = retrieve_evidence(record.query, clients.search, config)
    except (SearchUnavailable, RateLimited) as exc:
        record.notes.append(f"search stage failed: {exc}")
        _apply_outcome(triple, record)
        return record

    pages = score_and_filter(record.hits, clients.pagerank, clients.fetcher, config, record.notes)

    judged: list[EvidencePage] = []
    for page in pages:
        try:
            judged.append(judge_page(triple, page, clients.llm, config))
        except (LlmUnavailable, VerdictUnparseable, RateLimited) as exc:
            record.notes.append(f"page excluded from vote: {page.url} ({exc})")
    record.judged_pages = judged
    record.yes_count = sum(1 for p in judged if p.verdict == "yes")
    record.no_count = sum(1 for p in judged if p.verdict == "no")
    record.outcome = majority_vote([p.verdict for p in judged], config.min_evidence)
    _apply_outcome(triple, record)
    return record


def _apply_outcome(triple: Triple, record: ValidationRecord) -> None:
    if triple.status in EXPERT_LABELS:
        record.notes.append("expert label present; status not changed")
        return
    if triple.status is TripleStatus.PENDING:
        triple.status = record.outcome


def validate_batch(
    triples: list[Triple],
    config: DasConfig,
    clients: ClientBundle,
    parallelism: int = 1,
) -> list[ValidationRecord]:
    """Validate many triples, fanning out across a thread pool.

    Records come back ordered by triple id, so the audit log is identical
    for any parallelism setting.
    """
    ordered = sorted(triples, key=lambda t: t.id)
    if parallelism > 1 and len(ordered) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(lambda t: validate_triple(t, config, clients), ordered))
    return [validate_triple(triple, config, clients) for triple in ordered]
