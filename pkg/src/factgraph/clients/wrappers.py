"""Cache-aware wrappers around the client roles.

Each wrapper reduces a call to a canonical request payload and routes it
through :func:`cached_call`, so one recorded live run can be replayed
offline byte-for-byte. In replay mode no inner client is needed at all.
"""

from __future__ import annotations

import json

from .base import ClientBundle, SearchHit
from .cache import CachedCallMode, ClientCache, ClientRequest, cached_call


class CachingLlm:
    def __init__(self, inner, cache: ClientCache | None, mode: CachedCallMode):
        self.inner = inner
        self.cache = cache
        self.mode = mode

    def complete(self, prompt: str) -> str:
        request = ClientRequest(role="llm", payload=prompt)
        return cached_call(
            request, self.mode, self.cache, live=lambda _: self.inner.complete(prompt)
        )


class CachingSearch:
    def __init__(self, inner, cache: ClientCache | None, mode: CachedCallMode):
        self.inner = inner
        self.cache = cache
        self.mode = mode

    def search(self, query: str, n: int) -> list[SearchHit]:
        request = ClientRequest(
            role="search", payload=json.dumps({"n": n, "query": query}, sort_keys=True)
        )
        rows = cached_call(
            request,
            self.mode,
            self.cache,
            live=lambda _: [hit.as_dict() for hit in self.inner.search(query, n)],
        )
        return [
            SearchHit(url=r["url"], title=r.get("title", ""), snippet=r.get("snippet", ""))
            for r in rows
        ]


class CachingPageRank:
    def __init__(self, inner, cache: ClientCache | None, mode: CachedCallMode):
        self.inner = inner
        self.cache = cache
        self.mode = mode

    def page_rank(self, domain: str) -> float:
        request = ClientRequest(role="pagerank", payload=domain)
        return float(
            cached_call(
                request, self.mode, self.cache, live=lambda _: self.inner.page_rank(domain)
            )
        )


class CachingFetcher:
    def __init__(self, inner, cache: ClientCache | None, mode: CachedCallMode):
        self.inner = inner
        self.cache = cache
        self.mode = mode

    def fetch(self, url: str) -> str:
        request = ClientRequest(role="fetch", payload=url)
        return cached_call(
            request, self.mode, self.cache, live=lambda _: self.inner.fetch(url)
        )


def wrap_bundle(bundle: ClientBundle | None, cache: ClientCache | None, mode: CachedCallMode) -> ClientBundle:
    """Wrap a live bundle (or None, for replay) in the caching layer."""

    class _Absent:
        def __getattr__(self, name):
            raise RuntimeError("no live client configured; replay mode only serves cached responses")

    inner = bundle if bundle is not None else ClientBundle(_Absent(), _Absent(), _Absent(), _Absent())
    return ClientBundle(
        llm=CachingLlm(inner.llm, cache, mode),
        search=CachingSearch(inner.search, cache, mode),
        pagerank=CachingPageRank(inner.pagerank, cache, mode),
        fetcher=CachingFetcher(inner.fetcher, cache, mode),
    )
