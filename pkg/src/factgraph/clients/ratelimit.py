"""Token-bucket rate limiting shared across concurrent pipeline workers."""

from __future__ import annotations

import threading
import time


class TokenBucket:
    """Classic token bucket: ``rate`` tokens/second up to ``capacity``.

    ``acquire`` blocks until a token is available. Clock and sleep are
    injectable for tests. A rate of 0 disables limiting.
    """

    def __init__(self, rate: float, capacity: float | None = None, clock=time.monotonic, sleep=time.sleep):
        self.rate = rate
        self.capacity = capacity if capacity is not None else max(rate, 1.0)
        self._tokens = self.capacity
        self._clock = clock
        self._sleep = sleep
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        if self.rate <= 0:
            return
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            self._sleep(wait)
