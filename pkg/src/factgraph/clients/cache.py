"""Response caching with record/replay.

Every outbound request is reduced to a canonical payload and hashed; the
cache stores one immutable JSON file per key. Recording turns one paid run
into a permanent offline fixture; replay serves from the cache only and
performs zero network activity.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import ReplayMiss

MODES = ("live", "record", "replay", "fixture")
CachedCallMode = str  # one of MODES


@dataclass(frozen=True)
class ClientRequest:
    role: str  # llm | search | pagerank | fetch
    payload: str

    @property
    def cache_key(self) -> str:
        digest = hashlib.sha256(f"{self.role}\n{self.payload}".encode("utf-8"))
        return digest.hexdigest()


class ClientCache:
    """Directory-backed response cache, one file per cache key."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, request: ClientRequest):
        path = self._path(request.cache_key)
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        return entry["response"]

    def put(self, request: ClientRequest, response, source: str = "live") -> None:
        path = self._path(request.cache_key)
        with self._lock:
            if path.exists():
                return  # entries are immutable once written
            entry = {
                "cache_key": request.cache_key,
                "role": request.role,
                "payload": request.payload,
                "response": response,
                "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "source": source,
            }
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, ensure_ascii=False), encoding="utf-8")
            tmp.replace(path)


def cached_call(request: ClientRequest, mode: str, cache: ClientCache | None, live, fixture=None):
    """Dispatch one request according to the cache mode.

    live: bypass the cache entirely. record: serve from cache when present,
    otherwise call live and persist. replay: cache only, ReplayMiss on
    absence. fixture: serve from the fixture callable only.
    """
    if mode not in MODES:
        raise ValueError(f"unknown cache mode: {mode}")
    if mode == "fixture":
        if fixture is None:
            raise ValueError("fixture mode requires a fixture callable")
        return fixture(request)
    if mode == "live":
        return live(request)
    if cache is None:
        raise ValueError(f"{mode} mode requires a cache")
    if mode == "replay":
        response = cache.get(request)
        if response is None:
            raise ReplayMiss(f"no cached response for {request.role} request {request.cache_key}")
        return response
    # record
    response = cache.get(request)
    if response is not None:
        return response
    response = live(request)
    cache.put(request, response, source="live")
    return response
