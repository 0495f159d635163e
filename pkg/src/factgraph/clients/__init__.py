"""Service client roles: interfaces, HTTP adapters, caching, fixtures."""

from __future__ import annotations

import os
from pathlib import Path

from .base import ClientBundle, LlmClient, PageFetcher, PageRankClient, SearchClient, SearchHit
from .cache import ClientCache, ClientRequest, cached_call
from .fixtures import FixtureTables, build_fixture_bundle
from .ratelimit import TokenBucket
from .wrappers import wrap_bundle

__all__ = [
    "ClientBundle",
    "ClientCache",
    "ClientRequest",
    "FixtureTables",
    "LlmClient",
    "PageFetcher",
    "PageRankClient",
    "SearchClient",
    "SearchHit",
    "TokenBucket",
    "build_clients",
    "build_fixture_bundle",
    "cached_call",
    "wrap_bundle",
]

_ENV_KEYS = {
    "llm_endpoint": "LLM_ENDPOINT",
    "llm_key": "LLM_KEY",
    "llm_model": "LLM_MODEL",
    "search_endpoint": "SEARCH_ENDPOINT",
    "search_key": "SEARCH_KEY",
    "pagerank_endpoint": "PAGERANK_ENDPOINT",
    "pagerank_key": "PAGERANK_KEY",
}


def _setting(settings: dict | None, key: str) -> str:
    # environment variables override config-file values for credentials
    env_value = os.environ.get(_ENV_KEYS.get(key, ""), "")
    if env_value:
        return env_value
    if settings and settings.get(key):
        return str(settings[key])
    return ""


def build_clients(
    mode: str,
    fixtures_path: str | Path | None = None,
    cache_dir: str | Path | None = None,
    settings: dict | None = None,
) -> ClientBundle:
    """Assemble the client bundle for a pipeline run.

    fixture: deterministic rule/table clients, no network. replay: cached
    responses only, no credentials needed. record/live: HTTP clients built
    from settings with environment-variable fallbacks; record persists every
    response into the cache directory.
    """
    if mode == "fixture":
        tables = FixtureTables.load(fixtures_path) if fixtures_path else FixtureTables()
        return build_fixture_bundle(tables)

    cache = ClientCache(cache_dir) if cache_dir else None
    if mode == "replay":
        if cache is None:
            raise ValueError("replay mode requires a cache directory")
        return wrap_bundle(None, cache, "replay")

    if mode not in ("live", "record"):
        raise ValueError(f"unknown client mode: {mode}")
    if mode == "record" and cache is None:
        raise ValueError("record mode requires a cache directory")

    from .http import HttpLlmClient, HttpPageFetcher, HttpPageRankClient, HttpSearchClient

    llm_endpoint = _setting(settings, "llm_endpoint")
    search_endpoint = _setting(settings, "search_endpoint")
    pagerank_endpoint = _setting(settings, "pagerank_endpoint")
    missing = [
        name
        for name, value in (
            ("LLM_ENDPOINT", llm_endpoint),
            ("SEARCH_ENDPOINT", search_endpoint),
            ("PAGERANK_ENDPOINT", pagerank_endpoint),
        )
        if not value
    ]
    if missing:
        raise ValueError(f"{mode} mode requires endpoints: {', '.join(missing)}")

    live = ClientBundle(
        llm=HttpLlmClient(
            llm_endpoint,
            api_key=_setting(settings, "llm_key"),
            model=_setting(settings, "llm_model"),
        ),
        search=HttpSearchClient(search_endpoint, api_key=_setting(settings, "search_key")),
        pagerank=HttpPageRankClient(pagerank_endpoint, api_key=_setting(settings, "pagerank_key")),
        fetcher=HttpPageFetcher(),
    )
    return wrap_bundle(live, cache, mode)
