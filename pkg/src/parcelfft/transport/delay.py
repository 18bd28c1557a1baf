"""Latency-injection decorator for endpoints.

Defers each frame's hand-off to the wrapped endpoint by at least the
configured latency, using a single scheduler thread with a time-ordered
heap, so concurrent deliveries overlap instead of serializing.  Counters
and all other semantics pass straight through to the inner endpoint.
"""

from __future__ import annotations

import heapq
import itertools
import threading
import time
from concurrent.futures import Future

from .base import Endpoint, ByteCounters
from .errors import EndpointShutdownError


def _chain(src: Future, dst: Future) -> None:
    def copy(f: Future) -> None:
        exc = f.exception()
        if exc is not None:
            dst.set_exception(exc)
        else:
            dst.set_result(f.result())

    src.add_done_callback(copy)


class _Scheduler:
    def __init__(self):
        self._cv = threading.Condition()
        self._heap: list[tuple[float, int, object]] = []
        self._seq = itertools.count()
        self._stopping = False
        self._thread = threading.Thread(target=self._run, daemon=True, name="pcl-delay")
        self._thread.start()

    def push(self, due: float, action) -> None:
        with self._cv:
            heapq.heappush(self._heap, (due, next(self._seq), action))
            self._cv.notify()

    def _run(self) -> None:
        while True:
            with self._cv:
                while True:
                    if self._heap:
                        due = self._heap[0][0]
                        now = time.monotonic()
                        if due <= now:
                            _, _, action = heapq.heappop(self._heap)
                            break
                        self._cv.wait(timeout=due - now)
                    elif self._stopping:
                        return
                    else:
                        self._cv.wait()
            action()

    def drain_and_stop(self) -> None:
        """Block until every scheduled action has run, then stop the thread."""
        with self._cv:
            self._stopping = True
            self._cv.notify()
        self._thread.join()


class DelayedEndpoint(Endpoint):
    def __init__(self, inner: Endpoint, latency_s: float):
        if latency_s < 0:
            raise ValueError(f"latency must be >= 0, got {latency_s}")
        self._inner = inner
        self._latency = latency_s
        self._sched = _Scheduler() if latency_s > 0 else None

    @property
    def rank(self) -> int:
        return self._inner.rank

    @property
    def world_size(self) -> int:
        return self._inner.world_size

    @property
    def backend_name(self) -> str:
        return self._inner.backend_name

    @property
    def closed(self) -> bool:
        return self._inner.closed

    def send(self, dst: int, tag: int, payload) -> Future:
        if self._sched is None:
            return self._inner.send(dst, tag, payload)
        if self._inner.closed:
            raise EndpointShutdownError("send on shut-down endpoint")
        if not 0 <= dst < self._inner.world_size:
            raise ValueError(f"unknown destination rank {dst}")
        data = bytes(payload)  # capture now, not at delivery time
        outer: Future = Future()

        def hand_off():
            try:
                _chain(self._inner.send(dst, tag, data), outer)
            except BaseException as e:
                outer.set_exception(e)

        self._sched.push(time.monotonic() + self._latency, hand_off)
        return outer

    def recv(self, src: int, tag: int) -> Future:
        return self._inner.recv(src, tag)

    def counters(self) -> ByteCounters:
        return self._inner.counters()

    def shutdown(self) -> None:
        # Finish deferred hand-offs first so in-flight frames are flushed.
        if self._sched is not None:
            self._sched.drain_and_stop()
            self._sched = None
        self._inner.shutdown()
