"""Collective operations over a transport endpoint.

A :class:`Communicator` wraps an endpoint with per-collective-kind sequence
counters.  Each invocation burns one sequence number of its kind, so ranks
that issue collectives in the same order always agree on tags and neither
concurrent nor back-to-back collectives can steal each other's frames.

Tags pack ``(kind, root, seq)`` injectively into the 64-bit transport tag:
``kind`` in the top 8 bits, ``root`` in the next 16, ``seq`` in the low 40.
All collectives return completion handles so several may be outstanding at
once; mismatched participation (e.g. differing roots) is not detected and
manifests as a hang.
"""

from __future__ import annotations

import threading
from concurrent.futures import Future

from .transport import Endpoint
from .transport.base import completed_future

KIND_SCATTER = 1
KIND_ALLTOALL = 2
KIND_GATHER = 3
KIND_BARRIER = 4

_ROOT_BITS = 16
_SEQ_BITS = 40
_SEQ_MASK = (1 << _SEQ_BITS) - 1


def pack_tag(kind: int, root: int, seq: int) -> int:
    """(kind << 56) | (root << 40) | seq — injective on the stated ranges."""
    if not 0 <= kind < 1 << 8:
        raise ValueError(f"kind {kind} out of 8-bit range")
    if not 0 <= root < 1 << _ROOT_BITS:
        raise ValueError(f"root {root} out of 16-bit range")
    if not 0 <= seq < 1 << _SEQ_BITS:
        raise ValueError(f"seq {seq} out of 40-bit range")
    return (kind << 56) | (root << 40) | seq


def _map_future(src: Future, fn) -> Future:
    out: Future = Future()

    def copy(f: Future) -> None:
        exc = f.exception()
        if exc is not None:
            out.set_exception(exc)
        else:
            try:
                out.set_result(fn(f.result()))
            except BaseException as e:
                out.set_exception(e)

    src.add_done_callback(copy)
    return out


def _when_all(futures) -> Future:
    """Future completing with a list of all results (or the first exception)."""
    futures = list(futures)
    out: Future = Future()
    if not futures:
        out.set_result([])
        return out
    lock = threading.Lock()
    remaining = [len(futures)]
    results = [None] * len(futures)

    def make_cb(i):
        def cb(f: Future) -> None:
            exc = f.exception()
            if exc is not None:
                if not out.done():
                    try:
                        out.set_exception(exc)
                    except Exception:
                        pass
                return
            results[i] = f.result()
            with lock:
                remaining[0] -= 1
                done = remaining[0] == 0
            if done:
                out.set_result(results)

        return cb

    for i, f in enumerate(futures):
        f.add_done_callback(make_cb(i))
    return out


class Communicator:
    """Rank context for collectives: endpoint + world size + sequence state.

    All ranks must issue collectives in the same order; handles may be
    awaited in any order and from any thread.
    """

    def __init__(self, endpoint: Endpoint):
        self.endpoint = endpoint
        self.rank = endpoint.rank
        self.world_size = endpoint.world_size
        self._lock = threading.Lock()
        self._seq = {KIND_SCATTER: 0, KIND_ALLTOALL: 0, KIND_GATHER: 0, KIND_BARRIER: 0}

    def _next_tag(self, kind: int, root: int) -> int:
        with self._lock:
            seq = self._seq[kind]
            self._seq[kind] = (seq + 1) & _SEQ_MASK
        return pack_tag(kind, root, seq)

    def scatter(self, root: int, chunks=None) -> Future:
        """Root distributes one chunk per rank; the handle yields this
        rank's chunk.  The root's own chunk is delivered locally, so a
        scatter sends exactly world_size - 1 off-rank messages."""
        if not 0 <= root < self.world_size:
            raise ValueError(f"root {root} out of range")
        if self.rank == root and (chunks is None or len(chunks) != self.world_size):
            got = "none" if chunks is None else len(chunks)
            raise ValueError(f"root needs exactly {self.world_size} chunks, got {got}")
        if self.rank != root and chunks is not None:
            raise ValueError("chunks may only be passed on the root rank")
        tag = self._next_tag(KIND_SCATTER, root)
        if self.rank == root:
            captured = [bytes(c) for c in chunks]
            for r in range(self.world_size):
                if r != root:
                    self.endpoint.send(r, tag, captured[r])
            return completed_future(captured[root])
        return self.endpoint.recv(root, tag)

    def all_to_all(self, chunks) -> Future:
        """Chunk j goes to rank j; the handle yields the world_size chunks
        addressed to this rank, indexed by source.

        Linear shift: step s sends to (rank+s) mod P and receives from
        (rank-s) mod P.  All sends are posted eagerly; completion is
        synchronized: the handle resolves only after every remote chunk
        has arrived and every outgoing chunk has been handed off."""
        if len(chunks) != self.world_size:
            raise ValueError(f"need exactly {self.world_size} chunks, got {len(chunks)}")
        captured = [bytes(c) for c in chunks]  # capture before burning a seq number
        tag = self._next_tag(KIND_ALLTOALL, 0)
        world = self.world_size
        sources = [(self.rank - s) % world for s in range(1, world)]
        recvs = [self.endpoint.recv(src, tag) for src in sources]
        sends = []
        for s in range(1, world):
            dst = (self.rank + s) % world
            sends.append(self.endpoint.send(dst, tag, captured[dst]))

        def assemble(completions):
            result = [None] * world
            result[self.rank] = captured[self.rank]
            for src, payload in zip(sources, completions[:len(sources)]):
                result[src] = payload
            return result

        return _map_future(_when_all(recvs + sends), assemble)

    def gather(self, root: int, chunk) -> Future:
        """Collect one chunk per rank at the root.  The root's handle yields
        the list indexed by source rank; non-root handles yield None."""
        if not 0 <= root < self.world_size:
            raise ValueError(f"root {root} out of range")
        tag = self._next_tag(KIND_GATHER, root)
        own = bytes(chunk)
        if self.rank != root:
            return _map_future(self.endpoint.send(root, tag, own), lambda _: None)
        recvs = {r: self.endpoint.recv(r, tag) for r in range(self.world_size) if r != root}

        def assemble(received):
            result = [None] * self.world_size
            result[root] = own
            for r, payload in zip(recvs.keys(), received):
                result[r] = payload
            return result

        return _map_future(_when_all(recvs.values()), assemble)

    def barrier(self) -> Future:
        """No handle completes before every rank has entered: empty-payload
        gather to rank 0, then empty-payload scatter back out."""
        tag = self._next_tag(KIND_BARRIER, 0)
        world = self.world_size
        if world == 1:
            return completed_future(None)
        ep = self.endpoint
        if self.rank != 0:
            ep.send(0, tag, b"")
            return _map_future(ep.recv(0, tag), lambda _: None)
        entries = _when_all([ep.recv(r, tag) for r in range(1, world)])
        out: Future = Future()

        def release(f: Future) -> None:
            exc = f.exception()
            if exc is not None:
                out.set_exception(exc)
                return
            try:
                for r in range(1, world):
                    ep.send(r, tag, b"")
            except BaseException as e:
                out.set_exception(e)
                return
            out.set_result(None)

        entries.add_done_callback(release)
        return out
