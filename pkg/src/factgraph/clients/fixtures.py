"""Deterministic fixture clients for offline runs and tests.

These are test doubles, not claims about real service behavior. The fixture
LLM dispatches on the prompt header lines and applies fixed rules: a tiny
lexicon-based statement extractor for extraction prompts, and for judging
prompts a plain containment rule (yes iff every statement keyword appears in
the reference text). Search, page-rank, and page-fetch fixtures are table
lookups loaded from a JSON file.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .. import prompts
from ..errors import FetchFailure
from .base import ClientBundle, SearchHit

logger = logging.getLogger(__name__)

_WORD_RE = re.compile(r"\w+")
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_EDGE_PUNCT = ".,;:!?\"'()[]"

# Closed verb lexicon for the rule-based extractor.
_VERBS = frozenset(
    """
    contaminates contaminate contaminated poisons poison poisoned uses use used
    causes cause caused harms harm harmed restores restore restored threatens
    threaten threatened pollutes pollute polluted destroys destroy destroyed
    employs employ employed affects affect affected produces produce produced
    releases release released damages damage damaged reduces reduce reduced
    supports support supported contains contain contained increases increase
    increased decreases decrease decreased drives drive creates create created
    enables enable enabled requires require required leads lead kills kill
    killed degrades degrade degraded expands expand expanded improves improve
    improved is are was were has have
    """.split()
)

_PREPOSITIONS = frozenset("in on of to from with by at into for".split())
_PRONOUNS = frozenset(["it", "they", "he", "she", "this"])
_AUXILIARIES = frozenset("does do did can could will would should must may".split())


def _tokens(text: str) -> set[str]:
    return set(_WORD_RE.findall(text.lower()))


class FixtureLlm:
    """Rule-based stand-in for the LLM role."""

    def complete(self, prompt: str) -> str:
        first_line = prompt.split("\n", 1)[0]
        if first_line == prompts.EXTRACTION_PROMPT_HEADER:
            return self._extract(prompt)
        if first_line == prompts.JUDGE_PROMPT_HEADER:
            return self._judge(prompt)
        if first_line == prompts.CHAT_PROMPT_HEADER:
            return self._chat(prompt)
        if first_line == prompts.SUMMARIZE_PROMPT_HEADER:
            return self._summarize(prompt)
        raise ValueError(f"fixture LLM does not recognize this prompt: {first_line!r}")

    def _extract(self, prompt: str) -> str:
        marker = "\nTEXT:\n"
        text = prompt[prompt.index(marker) + len(marker):]
        rows = ["Subject | Predicate | Object"]
        last_object: str | None = None
        for sentence in _SENTENCE_SPLIT.split(text):
            words = [w.strip(_EDGE_PUNCT) for w in sentence.split()]
            words = [w for w in words if w]
            if not words:
                continue
            if words[0].lower() in _PRONOUNS and last_object:
                words = last_object.split() + words[1:]
            parsed = self._parse_sentence(words)
            if parsed is None:
                continue
            subject, relation, obj = parsed
            rows.append(f"{subject} | {relation} | {obj}")
            last_object = obj
        return "\n".join(rows)

    @staticmethod
    def _parse_sentence(words: list[str]):
        verb_idx = next(
            (i for i, w in enumerate(words) if i > 0 and w.lower() in _VERBS), None
        )
        if verb_idx is None:
            return None
        negated = False
        subject_end = verb_idx
        if words[verb_idx - 1].lower() == "not":
            negated = True
            subject_end = verb_idx - 1
            if subject_end > 0 and words[subject_end - 1].lower() in _AUXILIARIES:
                subject_end -= 1
        elif words[verb_idx - 1].lower() == "cannot":
            negated = True
            subject_end = verb_idx - 1
        if subject_end == 0:
            return None
        relation = words[verb_idx]
        object_start = verb_idx + 1
        if object_start < len(words) and words[object_start].lower() in _PREPOSITIONS:
            relation = f"{relation} {words[object_start]}"
            object_start += 1
        if object_start >= len(words):
            return None
        subject = " ".join(words[:subject_end])
        obj = " ".join(words[object_start:])
        if negated:
            relation = f"not {relation}"
        return subject, relation, obj

    @staticmethod
    def _judge(prompt: str) -> str:
        statement = ""
        for line in prompt.splitlines():
            if line.startswith("STATEMENT: "):
                statement = line[len("STATEMENT: "):]
                break
        marker = "REFERENCE TEXT:\n"
        reference = prompt[prompt.index(marker) + len(marker):]
        missing = sorted(_tokens(statement) - _tokens(reference))
        if missing:
            return f"No | the reference text lacks: {', '.join(missing)}"
        return "Yes | every statement keyword appears in the reference text"

    @staticmethod
    def _chat(prompt: str) -> str:
        start = prompt.index("KNOWN STATEMENTS:\n") + len("KNOWN STATEMENTS:\n")
        end = prompt.index("\nQUESTION:")
        return prompt[start:end].strip()

    @staticmethod
    def _summarize(prompt: str) -> str:
        content = prompt.split("\n", 1)[1]
        words = content.split()
        return " ".join(words[:200])


@dataclass
class FixtureTables:
    """Scripted responses for the non-LLM roles."""

    search: dict[str, list[dict]] = field(default_factory=dict)
    page_rank: dict[str, float] = field(default_factory=dict)
    pages: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path) -> "FixtureTables":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            search=data.get("search", {}),
            page_rank={k: float(v) for k, v in data.get("page_rank", {}).items()},
            pages=data.get("pages", {}),
        )


class FixtureSearch:
    def __init__(self, table: dict[str, list[dict]]):
        self.table = table

    def search(self, query: str, n: int) -> list[SearchHit]:
        rows = self.table.get(query, [])
        return [
            SearchHit(url=r["url"], title=r.get("title", ""), snippet=r.get("snippet", ""))
            for r in rows[:n]
        ]


class FixturePageRank:
    def __init__(self, table: dict[str, float]):
        self.table = table

    def page_rank(self, domain: str) -> float:
        score = self.table.get(domain)
        if score is None:
            logger.warning("fixture page-rank unknown domain %r scored 0", domain)
            return 0.0
        return float(score)


class FixtureFetcher:
    def __init__(self, table: dict[str, str]):
        self.table = table

    def fetch(self, url: str) -> str:
        if url not in self.table:
            raise FetchFailure(f"no fixture page for {url}")
        return self.table[url]


def build_fixture_bundle(tables: FixtureTables | None = None) -> ClientBundle:
    tables = tables or FixtureTables()
    return ClientBundle(
        llm=FixtureLlm(),
        search=FixtureSearch(tables.search),
        pagerank=FixturePageRank(tables.page_rank),
        fetcher=FixtureFetcher(tables.pages),
    )
