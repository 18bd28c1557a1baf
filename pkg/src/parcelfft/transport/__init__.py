"""Pluggable rank-to-rank message transport with runtime-selectable backends."""

from __future__ import annotations

from .base import ByteCounters, CompletionHandle, Endpoint
from .delay import DelayedEndpoint
from .errors import (
    EndpointShutdownError,
    FrameDecodeError,
    PeerUnreachableError,
    TransportError,
)
from .frame import HEADER_SIZE, MAGIC, VERSION, Frame, decode_frame, encode_frame
from .inproc import InprocEndpoint, InprocGroup
from .tcp import HostTable, TcpEndpoint, parse_hostfile

BACKENDS = ("inproc", "tcp")


def endpoint_init(backend: str, rank: int, world) -> Endpoint:
    """Create a fully connected endpoint for ``rank``.

    ``world`` is an :class:`InprocGroup` for the in-process backend or a
    :class:`HostTable` for TCP.  The call returns only once every peer is
    reachable.
    """
    if backend == "inproc":
        if not isinstance(world, InprocGroup):
            raise ValueError("inproc backend needs an InprocGroup as world")
        return InprocEndpoint(rank, world)
    if backend == "tcp":
        if not isinstance(world, HostTable):
            raise ValueError("tcp backend needs a HostTable as world")
        return TcpEndpoint(rank, world)
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def delay_wrap(ep: Endpoint, per_message_latency_s: float) -> Endpoint:
    """Decorate ``ep`` so each frame's delivery is deferred by at least the
    given latency (seconds).  Counters still reflect true byte volumes."""
    return DelayedEndpoint(ep, per_message_latency_s)


__all__ = [
    "BACKENDS",
    "ByteCounters",
    "CompletionHandle",
    "DelayedEndpoint",
    "Endpoint",
    "EndpointShutdownError",
    "Frame",
    "FrameDecodeError",
    "HEADER_SIZE",
    "HostTable",
    "InprocEndpoint",
    "InprocGroup",
    "MAGIC",
    "PeerUnreachableError",
    "TcpEndpoint",
    "TransportError",
    "VERSION",
    "decode_frame",
    "delay_wrap",
    "encode_frame",
    "endpoint_init",
    "parse_hostfile",
]
