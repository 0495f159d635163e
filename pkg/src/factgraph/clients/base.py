"""Client interfaces for the external service roles.

Pipeline code only sees these four protocols; provider-specific request
shapes stay inside the HTTP adapters so tools can be swapped without
touching pipeline logic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable


@dataclass(frozen=True)
class SearchHit:
    url: str
    title: str
    snippet: str

    def as_dict(self) -> dict:
        return {"url": self.url, "title": self.title, "snippet": self.snippet}


@runtime_checkable
class LlmClient(Protocol):
    def complete(self, prompt: str) -> str: ...


@runtime_checkable
class SearchClient(Protocol):
    def search(self, query: str, n: int) -> list[SearchHit]: ...


@runtime_checkable
class PageRankClient(Protocol):
    def page_rank(self, domain: str) -> float: ...


@runtime_checkable
class PageFetcher(Protocol):
    def fetch(self, url: str) -> str: ...


@dataclass
class ClientBundle:
    """The full set of service clients a pipeline run needs."""

    llm: LlmClient
    search: SearchClient
    pagerank: PageRankClient
    fetcher: PageFetcher
