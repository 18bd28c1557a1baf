"""Endpoint contract and machinery shared by the in-process and TCP backends.

An Endpoint is a fully connected rank-to-rank message port.  Sends and
receives return :class:`concurrent.futures.Future` completion handles;
progress is autonomous, so a posted operation completes without the caller
polling.  The only ordering guarantee is per-(src, tag) FIFO.

Loopback sends to one's own rank short-circuit the network path but keep
ordering and counting semantics: they appear in ``messages_sent`` and the
payload totals, never in the off-rank or header byte counters.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from collections import deque
from concurrent.futures import Future
from dataclasses import dataclass

from .errors import EndpointShutdownError
from .frame import HEADER_SIZE

CompletionHandle = Future


@dataclass(frozen=True)
class ByteCounters:
    """Monotonic traffic snapshot for one endpoint.

    Header bytes are counted only for off-rank traffic (29 bytes per wire
    message); loopback frames never touch the wire.
    """

    payload_sent: int = 0
    payload_received: int = 0
    off_rank_payload_sent: int = 0
    off_rank_payload_received: int = 0
    header_sent: int = 0
    header_received: int = 0
    messages_sent: int = 0


def completed_future(value=None) -> Future:
    f: Future = Future()
    f.set_result(value)
    return f


def failed_future(exc: BaseException) -> Future:
    f: Future = Future()
    f.set_exception(exc)
    return f


class MatchQueue:
    """Receive-side matching: (src, tag) -> FIFO of payloads and waiting futures.

    Unmatched frames are queued, never dropped.  Futures are completed
    outside the internal lock so user callbacks may issue further sends.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._ready: dict[tuple[int, int], deque[bytes]] = {}
        self._waiting: dict[tuple[int, int], deque[Future]] = {}
        self._closed = False

    def deliver(self, src: int, tag: int, payload: bytes) -> None:
        key = (src, tag)
        waiter = None
        with self._lock:
            if self._closed:
                return  # endpoint gone; frame has nowhere to land
            q = self._waiting.get(key)
            if q:
                waiter = q.popleft()
                if not q:
                    del self._waiting[key]
            else:
                self._ready.setdefault(key, deque()).append(payload)
        if waiter is not None:
            waiter.set_result(payload)

    def post(self, src: int, tag: int) -> Future:
        key = (src, tag)
        fut: Future = Future()
        payload = None
        with self._lock:
            if self._closed:
                raise EndpointShutdownError("endpoint is shut down")
            q = self._ready.get(key)
            if q:
                payload = q.popleft()
                if not q:
                    del self._ready[key]
            else:
                self._waiting.setdefault(key, deque()).append(fut)
                return fut
        fut.set_result(payload)
        return fut

    def close(self) -> None:
        with self._lock:
            if self._closed:
                return
            self._closed = True
            waiters = [f for q in self._waiting.values() for f in q]
            self._waiting.clear()
            self._ready.clear()
        for f in waiters:
            f.set_exception(EndpointShutdownError("endpoint shut down with receive pending"))


class Endpoint(ABC):
    """Rank-to-rank message endpoint; safe for concurrent use from many threads."""

    @property
    @abstractmethod
    def rank(self) -> int: ...

    @property
    @abstractmethod
    def world_size(self) -> int: ...

    @property
    @abstractmethod
    def backend_name(self) -> str: ...

    @property
    @abstractmethod
    def closed(self) -> bool: ...

    @abstractmethod
    def send(self, dst: int, tag: int, payload) -> Future:
        """Post a send; the payload is captured at call time."""

    @abstractmethod
    def recv(self, src: int, tag: int) -> Future:
        """Post a matching receive for exactly one frame from (src, tag)."""

    @abstractmethod
    def counters(self) -> ByteCounters: ...

    @abstractmethod
    def shutdown(self) -> None:
        """Idempotent; flushes in-flight sends, then fails pending receives."""


class CounterBlock:
    """Mutable counters guarded by a lock; snapshots freeze to ByteCounters."""

    def __init__(self):
        self._lock = threading.Lock()
        self.payload_sent = 0
        self.payload_received = 0
        self.off_rank_payload_sent = 0
        self.off_rank_payload_received = 0
        self.header_sent = 0
        self.header_received = 0
        self.messages_sent = 0

    def record_send(self, nbytes: int, off_rank: bool) -> None:
        with self._lock:
            self.messages_sent += 1
            self.payload_sent += nbytes
            if off_rank:
                self.off_rank_payload_sent += nbytes
                self.header_sent += HEADER_SIZE

    def record_receive(self, nbytes: int, off_rank: bool) -> None:
        with self._lock:
            self.payload_received += nbytes
            if off_rank:
                self.off_rank_payload_received += nbytes
                self.header_received += HEADER_SIZE

    def snapshot(self) -> ByteCounters:
        with self._lock:
            return ByteCounters(
                payload_sent=self.payload_sent,
                payload_received=self.payload_received,
                off_rank_payload_sent=self.off_rank_payload_sent,
                off_rank_payload_received=self.off_rank_payload_received,
                header_sent=self.header_sent,
                header_received=self.header_received,
                messages_sent=self.messages_sent,
            )
