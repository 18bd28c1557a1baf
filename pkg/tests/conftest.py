"""Shared multi-rank drivers for both transports."""

from __future__ import annotations

import contextlib
import socket
import threading

import pytest

from parcelfft.collectives import Communicator
from parcelfft.runner import run_inproc
from parcelfft.transport import HostTable, InprocGroup, delay_wrap, endpoint_init

BACKENDS = ("inproc", "tcp")


def free_ports(n: int) -> list[int]:
    socks = [socket.socket() for _ in range(n)]
    try:
        for s in socks:
            s.bind(("127.0.0.1", 0))
        return [s.getsockname()[1] for s in socks]
    finally:
        for s in socks:
            s.close()


def local_host_table(world_size: int) -> HostTable:
    return HostTable(tuple((r, "127.0.0.1", p) for r, p in enumerate(free_ports(world_size))))


@contextlib.contextmanager
def endpoint_world(backend: str, world_size: int):
    """Yield one connected endpoint per rank, torn down afterwards."""
    if backend == "inproc":
        group = InprocGroup(world_size)
        eps = [endpoint_init("inproc", r, group) for r in range(world_size)]
    else:
        table = local_host_table(world_size)
        eps = [None] * world_size
        errors = []

        def init(rank):
            try:
                eps[rank] = endpoint_init("tcp", rank, table)
            except BaseException as e:
                errors.append(e)

        threads = [threading.Thread(target=init, args=(r,), daemon=True) for r in range(world_size)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=60)
        if errors:
            raise errors[0]
        assert all(ep is not None for ep in eps)
    try:
        yield eps
    finally:
        for ep in eps:
            ep.shutdown()


def run_tcp(world_size: int, fn, *, inject_latency_s: float = 0.0, timeout_s: float = 120.0):
    """TCP analogue of run_inproc: threads in this process, sockets on loopback."""
    table = local_host_table(world_size)
    results = [None] * world_size
    errors: list[tuple[int, BaseException]] = []
    endpoints = []
    reg_lock = threading.Lock()

    def abort_all():
        with reg_lock:
            eps = list(endpoints)
        for ep in eps:
            try:
                ep.shutdown()
            except Exception:
                pass

    def work(rank):
        try:
            ep = endpoint_init("tcp", rank, table)
            if inject_latency_s > 0:
                ep = delay_wrap(ep, inject_latency_s)
            with reg_lock:
                endpoints.append(ep)
        except BaseException as e:
            errors.append((rank, e))
            abort_all()
            return
        comm = Communicator(ep)
        try:
            results[rank] = fn(comm)
            comm.barrier().result(timeout=timeout_s)
        except BaseException as e:
            errors.append((rank, e))
            abort_all()
        finally:
            ep.shutdown()

    threads = [threading.Thread(target=work, args=(r,), daemon=True) for r in range(world_size)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=timeout_s)
    if any(t.is_alive() for t in threads):
        abort_all()
        raise TimeoutError("tcp rank threads did not finish")
    if errors:
        rank, err = errors[0]
        raise RuntimeError(f"rank {rank} failed: {err!r}") from err
    return results


def run_world(backend: str, world_size: int, fn, *, inject_latency_s: float = 0.0):
    if backend == "inproc":
        return run_inproc(world_size, fn, inject_latency_s=inject_latency_s)
    return run_tcp(world_size, fn, inject_latency_s=inject_latency_s)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
