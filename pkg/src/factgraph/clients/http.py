"""HTTP implementations of the client roles.

Each adapter owns its provider's request shape; endpoints and credentials
come from configuration (see the CLI docs for the environment variables).
Transient failures are retried with exponential backoff; credential
rejections surface as AuthError immediately.
"""

from __future__ import annotations

import logging
import re
import time

import requests

from ..errors import (
    AuthError,
    FetchFailure,
    LlmUnavailable,
    PageRankUnavailable,
    ProtocolError,
    SearchUnavailable,
)
from .base import SearchHit
from .ratelimit import TokenBucket

logger = logging.getLogger(__name__)

RETRY_ATTEMPTS = 3
BACKOFF_BASE_SECONDS = 0.5

_TAG_RE = re.compile(r"<[^>]+>")


def _retrying(send, unavailable, sleep=time.sleep):
    """Run ``send`` with up to RETRY_ATTEMPTS tries; raise ``unavailable`` after."""
    last: Exception | None = None
    for attempt in range(RETRY_ATTEMPTS):
        try:
            response = send()
        except requests.RequestException as exc:
            last = exc
            sleep(BACKOFF_BASE_SECONDS * (2**attempt))
            continue
        if response.status_code in (401, 403):
            raise AuthError(f"credentials rejected: HTTP {response.status_code}")
        if response.status_code == 429 or response.status_code >= 500:
            last = requests.HTTPError(f"HTTP {response.status_code}")
            sleep(BACKOFF_BASE_SECONDS * (2**attempt))
            continue
        return response
    raise unavailable(f"gave up after {RETRY_ATTEMPTS} attempts: {last}")


class HttpLlmClient:
    """Chat-completions-style endpoint adapter."""

    def __init__(self, endpoint: str, api_key: str = "", model: str = "", session=None, sleep=time.sleep):
        self.endpoint = endpoint
        self.api_key = api_key
        self.model = model
        self.session = session or requests.Session()
        self._sleep = sleep

    def complete(self, prompt: str) -> str:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        body = {"messages": [{"role": "user", "content": prompt}]}
        if self.model:
            body["model"] = self.model
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        response = _retrying(
            lambda: self.session.post(self.endpoint, json=body, headers=headers, timeout=60),
            LlmUnavailable,
            sleep=self._sleep,
        )
        try:
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"unexpected completion payload: {exc}") from None


class HttpSearchClient:
    """Search endpoint adapter.

    Expects a JSON payload ``{"results": [{"url", "title", "snippet"}, ...]}``
    from ``GET endpoint?q=<query>&count=<n>``.
    """

    def __init__(self, endpoint: str, api_key: str = "", session=None, rate: TokenBucket | None = None, sleep=time.sleep):
        self.endpoint = endpoint
        self.api_key = api_key
        self.session = session or requests.Session()
        self.rate = rate or TokenBucket(rate=1.0)
        self._sleep = sleep

    def search(self, query: str, n: int) -> list[SearchHit]:
        if not query:
            raise ValueError("query must be non-empty")
        self.rate.acquire()
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        response = _retrying(
            lambda: self.session.get(
                self.endpoint, params={"q": query, "count": n}, headers=headers, timeout=30
            ),
            SearchUnavailable,
            sleep=self._sleep,
        )
        try:
            results = response.json()["results"]
            hits = [
                SearchHit(url=r["url"], title=r.get("title", ""), snippet=r.get("snippet", ""))
                for r in results
            ]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProtocolError(f"unexpected search payload: {exc}") from None
        return hits[:n]


class HttpPageRankClient:
    """Domain-authority endpoint adapter (Open-Page-Rank-style API).

    ``GET endpoint?domains[]=<domain>`` with the key in an ``API-OPR``
    header; scores come back on a 0-10 scale. Unknown domains score 0 with
    a logged flag; out-of-range provider values are a protocol violation,
    never a score.
    """

    BATCH_LIMIT = 100  # provider's per-call domain cap

    def __init__(self, endpoint: str, api_key: str = "", session=None, rate: TokenBucket | None = None, sleep=time.sleep):
        self.endpoint = endpoint
        self.api_key = api_key
        self.session = session or requests.Session()
        self.rate = rate or TokenBucket(rate=1.0)
        self._sleep = sleep

    def page_rank(self, domain: str) -> float:
        if not domain:
            raise ValueError("domain must be non-empty")
        return self.page_ranks([domain])[domain]

    def page_ranks(self, domains: list[str]) -> dict[str, float]:
        scores: dict[str, float] = {}
        for start in range(0, len(domains), self.BATCH_LIMIT):
            batch = domains[start : start + self.BATCH_LIMIT]
            self.rate.acquire()
            headers = {"API-OPR": self.api_key} if self.api_key else {}
            response = _retrying(
                lambda batch=batch: self.session.get(
                    self.endpoint, params={"domains[]": batch}, headers=headers, timeout=30
                ),
                PageRankUnavailable,
                sleep=self._sleep,
            )
            try:
                rows = response.json()["response"]
            except (ValueError, KeyError, TypeError) as exc:
                raise ProtocolError(f"unexpected page-rank payload: {exc}") from None
            found: dict[str, float] = {}
            for row in rows:
                value = row.get("page_rank_decimal")
                if value is None:
                    continue
                score = float(value)
                if score < 0.0 or score > 10.0:
                    raise ProtocolError(f"page-rank score out of range [0,10]: {score}")
                found[row.get("domain", "")] = score
            for domain in batch:
                if domain in found:
                    scores[domain] = found[domain]
                else:
                    logger.warning("page-rank unknown domain %r scored 0", domain)
                    scores[domain] = 0.0
        return scores


class HttpPageFetcher:
    """Fetch an evidence page and reduce it to judgeable text."""

    def __init__(self, session=None, rate: TokenBucket | None = None, sleep=time.sleep):
        self.session = session or requests.Session()
        self.rate = rate or TokenBucket(rate=1.0)
        self._sleep = sleep

    def fetch(self, url: str) -> str:
        self.rate.acquire()
        try:
            response = _retrying(
                lambda: self.session.get(url, timeout=30),
                FetchFailure,
                sleep=self._sleep,
            )
        except AuthError as exc:
            raise FetchFailure(str(exc)) from None
        content_type = response.headers.get("Content-Type", "")
        text = response.text
        if "html" in content_type or text.lstrip().startswith("<"):
            text = _TAG_RE.sub(" ", text)
        return " ".join(text.split())
