"""In-process backend: ranks are threads sharing one mailbox fabric.

The group eagerly owns the per-rank mailboxes, so a rank may be sent to
before its own endpoint object has been constructed (startup-order races
between rank threads are benign).
"""

from __future__ import annotations

import threading
from concurrent.futures import Future

from .base import CounterBlock, Endpoint, ByteCounters, MatchQueue, completed_future
from .errors import EndpointShutdownError


class _RankState:
    def __init__(self):
        self.matcher = MatchQueue()
        self.counters = CounterBlock()
        self.closed = False
        self.claimed = False


class InprocGroup:
    """Shared fabric for ``world_size`` in-process endpoints."""

    def __init__(self, world_size: int):
        if world_size < 1:
            raise ValueError(f"world_size must be >= 1, got {world_size}")
        self.world_size = world_size
        self._lock = threading.Lock()
        self._states = [_RankState() for _ in range(world_size)]

    def _claim(self, rank: int) -> _RankState:
        if not 0 <= rank < self.world_size:
            raise ValueError(f"rank {rank} out of range for world of {self.world_size}")
        with self._lock:
            st = self._states[rank]
            if st.claimed:
                raise ValueError(f"rank {rank} already has an endpoint in this group")
            st.claimed = True
            return st


class InprocEndpoint(Endpoint):
    def __init__(self, rank: int, group: InprocGroup):
        self._group = group
        self._rank = rank
        self._state = group._claim(rank)

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def world_size(self) -> int:
        return self._group.world_size

    @property
    def backend_name(self) -> str:
        return "inproc"

    @property
    def closed(self) -> bool:
        return self._state.closed

    def send(self, dst: int, tag: int, payload) -> Future:
        if self._state.closed:
            raise EndpointShutdownError("send on shut-down endpoint")
        if not 0 <= dst < self._group.world_size:
            raise ValueError(f"unknown destination rank {dst}")
        data = bytes(payload)  # capture now; later caller mutation must not leak
        off_rank = dst != self._rank
        self._state.counters.record_send(len(data), off_rank)
        dest = self._group._states[dst]
        if not dest.closed:
            dest.counters.record_receive(len(data), off_rank)
            dest.matcher.deliver(self._rank, tag, data)
        return completed_future(None)

    def recv(self, src: int, tag: int) -> Future:
        if self._state.closed:
            raise EndpointShutdownError("recv on shut-down endpoint")
        if not 0 <= src < self._group.world_size:
            raise ValueError(f"unknown source rank {src}")
        return self._state.matcher.post(src, tag)

    def counters(self) -> ByteCounters:
        return self._state.counters.snapshot()

    def shutdown(self) -> None:
        if self._state.closed:
            return
        self._state.closed = True
        self._state.matcher.close()
