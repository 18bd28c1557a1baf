"""TCP backend: a full mesh of stream sockets, one connection per peer pair.

Connection setup tolerates startup-order races: the lower-ranked peer of
each pair initiates, retrying with exponential backoff (50 ms initial,
doubling, 10 attempts) until the higher-ranked peer's listener is up.
Each established socket gets one sender thread (so ``send`` returns
immediately) and one receiver thread (so progress is autonomous).
"""

from __future__ import annotations

import queue
import socket
import struct
import threading
import time
from concurrent.futures import Future
from dataclasses import dataclass

from .base import CounterBlock, Endpoint, ByteCounters, MatchQueue, completed_future
from .errors import (
    EndpointShutdownError,
    FrameDecodeError,
    PeerUnreachableError,
    TransportError,
)
from .frame import HEADER_SIZE, decode_header, encode_header

_BACKOFF_INITIAL_S = 0.05
_CONNECT_ATTEMPTS = 10
_HELLO = struct.Struct("<I")  # initiator announces its rank after connecting


@dataclass(frozen=True)
class HostTable:
    """Rendezvous table: one (rank, host, port) entry per rank, rank-ordered."""

    entries: tuple[tuple[int, str, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty host table")
        ranks = [r for r, _, _ in self.entries]
        if ranks != list(range(len(self.entries))):
            raise ValueError(f"ranks must be exactly 0..{len(self.entries) - 1} in order, got {ranks}")
        for r, host, port in self.entries:
            if not host:
                raise ValueError(f"rank {r}: empty host")
            if not 1 <= port <= 65535:
                raise ValueError(f"rank {r}: port {port} out of range [1, 65535]")

    @property
    def world_size(self) -> int:
        return len(self.entries)

    def address(self, rank: int) -> tuple[str, int]:
        _, host, port = self.entries[rank]
        return host, port

    @classmethod
    def parse(cls, text: str) -> "HostTable":
        """Parse hostfile text: one ``<rank> <host>:<port>`` line per rank,
        ranks ascending, ``#`` comments and blank lines allowed."""
        entries = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or ":" not in parts[1]:
                raise ValueError(f"hostfile line {lineno}: expected '<rank> <host>:<port>', got {raw!r}")
            host, _, port_s = parts[1].rpartition(":")
            try:
                entries.append((int(parts[0]), host, int(port_s)))
            except ValueError as e:
                raise ValueError(f"hostfile line {lineno}: {e}") from e
        return cls(entries=tuple(entries))


def parse_hostfile(path) -> HostTable:
    with open(path, "r", encoding="utf-8") as fh:
        return HostTable.parse(fh.read())


class _Eof(Exception):
    pass


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray(n)
    view = memoryview(buf)
    got = 0
    while got < n:
        k = sock.recv_into(view[got:], n - got)
        if k == 0:
            raise _Eof()
        got += k
    return bytes(buf)


class TcpEndpoint(Endpoint):
    def __init__(self, rank: int, table: HostTable, *, accept_timeout: float = 60.0,
                 connect_attempts: int | None = None,
                 backoff_initial_s: float | None = None):
        if not 0 <= rank < table.world_size:
            raise ValueError(f"rank {rank} not in host table of {table.world_size}")
        self._rank = rank
        self._table = table
        self._connect_attempts = _CONNECT_ATTEMPTS if connect_attempts is None else connect_attempts
        self._backoff_initial_s = _BACKOFF_INITIAL_S if backoff_initial_s is None else backoff_initial_s
        self._counters = CounterBlock()
        self._matcher = MatchQueue()
        self._lock = threading.Lock()
        self._closed = False
        self._socks: dict[int, socket.socket] = {}
        self._send_queues: dict[int, queue.SimpleQueue] = {}
        self._senders: list[threading.Thread] = []
        self._receivers: list[threading.Thread] = []

        _, port = table.address(rank)
        listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            listener.bind(("", port))
            listener.listen(table.world_size)
        except OSError as e:
            listener.close()
            raise TransportError(f"rank {rank}: cannot bind port {port}: {e}") from e
        listener.settimeout(accept_timeout)
        try:
            # Lower-ranked peers dial us; expect exactly one connection each.
            for _ in range(rank):
                try:
                    conn, _ = listener.accept()
                except socket.timeout as e:
                    raise PeerUnreachableError(
                        f"rank {rank}: timed out waiting for lower-ranked peers"
                    ) from e
                conn.settimeout(accept_timeout)
                peer = _HELLO.unpack(_recv_exact(conn, _HELLO.size))[0]
                conn.settimeout(None)
                conn.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
                self._socks[peer] = conn
            # We dial every higher-ranked peer.
            for peer in range(rank + 1, table.world_size):
                self._socks[peer] = self._connect_with_backoff(peer)
        except BaseException:
            for s in self._socks.values():
                s.close()
            listener.close()
            raise
        listener.close()

        for peer, sock in self._socks.items():
            q: queue.SimpleQueue = queue.SimpleQueue()
            self._send_queues[peer] = q
            ts = threading.Thread(
                target=self._sender_loop, args=(sock, q), daemon=True,
                name=f"pclsend-{rank}-{peer}")
            tr = threading.Thread(
                target=self._receiver_loop, args=(sock,), daemon=True,
                name=f"pclrecv-{rank}-{peer}")
            self._senders.append(ts)
            self._receivers.append(tr)
            ts.start()
            tr.start()

    def _connect_with_backoff(self, peer: int) -> socket.socket:
        host, port = self._table.address(peer)
        delay = self._backoff_initial_s
        last: Exception | None = None
        for _ in range(self._connect_attempts):
            try:
                s = socket.create_connection((host, port), timeout=10.0)
                s.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
                s.sendall(_HELLO.pack(self._rank))
                return s
            except OSError as e:
                last = e
                time.sleep(delay)
                delay *= 2
        raise PeerUnreachableError(
            f"rank {self._rank}: peer {peer} at {host}:{port} unreachable "
            f"after {self._connect_attempts} attempts"
        ) from last

    def _sender_loop(self, sock: socket.socket, q: queue.SimpleQueue) -> None:
        while True:
            item = q.get()
            if item is None:
                return
            header, data, fut = item
            try:
                sock.sendall(header)
                if data:
                    sock.sendall(data)
                fut.set_result(None)
            except OSError as e:
                fut.set_exception(TransportError(f"send failed: {e}"))

    def _receiver_loop(self, sock: socket.socket) -> None:
        try:
            while True:
                src, _dst, tag, length = decode_header(_recv_exact(sock, HEADER_SIZE))
                payload = _recv_exact(sock, length) if length else b""
                self._counters.record_receive(length, off_rank=True)
                self._matcher.deliver(src, tag, payload)
        except (_Eof, OSError):
            return  # peer closed or we are shutting down
        except FrameDecodeError:
            return  # stream corrupted; no recovery possible mid-stream

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def world_size(self) -> int:
        return self._table.world_size

    @property
    def connected_peers(self) -> int:
        return len(self._socks)

    @property
    def backend_name(self) -> str:
        return "tcp"

    @property
    def closed(self) -> bool:
        return self._closed

    def send(self, dst: int, tag: int, payload) -> Future:
        data = bytes(payload)
        with self._lock:
            if self._closed:
                raise EndpointShutdownError("send on shut-down endpoint")
            if not 0 <= dst < self._table.world_size:
                raise ValueError(f"unknown destination rank {dst}")
            off_rank = dst != self._rank
            self._counters.record_send(len(data), off_rank)
            if off_rank:
                fut: Future = Future()
                header = encode_header(self._rank, dst, tag, len(data))
                self._send_queues[dst].put((header, data, fut))
                return fut
            self._counters.record_receive(len(data), off_rank=False)
        # loopback: deliver outside the lock so recv callbacks may send again
        self._matcher.deliver(self._rank, tag, data)
        return completed_future(None)

    def recv(self, src: int, tag: int) -> Future:
        if self._closed:
            raise EndpointShutdownError("recv on shut-down endpoint")
        if not 0 <= src < self._table.world_size:
            raise ValueError(f"unknown source rank {src}")
        return self._matcher.post(src, tag)

    def counters(self) -> ByteCounters:
        return self._counters.snapshot()

    def shutdown(self) -> None:
        with self._lock:
            if self._closed:
                return
            self._closed = True
            for q in self._send_queues.values():
                q.put(None)
        for t in self._senders:  # flush in-flight sends before closing sockets
            t.join(timeout=30.0)
        for sock in self._socks.values():
            try:
                sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            sock.close()
        for t in self._receivers:
            t.join(timeout=30.0)
        self._matcher.close()
