"""In-process multi-rank execution: one thread per rank, shared fabric.

``run_inproc`` is the standard way to drive collectives and the distributed
FFT at desk scale without spawning processes.  After the per-rank function
returns, ranks rendezvous on a final barrier before tearing their endpoints
down, so no endpoint disappears while peers still depend on it.  If any
rank fails, every endpoint is shut down immediately so the surviving ranks
unblock instead of hanging in that barrier.
"""

from __future__ import annotations

import threading

from .collectives import Communicator
from .transport import InprocGroup, delay_wrap, endpoint_init


def run_inproc(world_size: int, fn, *, inject_latency_s: float = 0.0, join_timeout_s: float = 300.0):
    """Run ``fn(comm)`` on ``world_size`` in-process ranks; returns the
    per-rank results as a list indexed by rank.

    The chronologically first rank exception is re-raised in the caller
    after all threads finish.  ``inject_latency_s`` wraps every endpoint in
    the delay decorator.
    """
    group = InprocGroup(world_size)
    results = [None] * world_size
    errors: list[tuple[int, BaseException]] = []
    endpoints = []
    reg_lock = threading.Lock()

    def abort_all() -> None:
        with reg_lock:
            eps = list(endpoints)
        for ep in eps:
            try:
                ep.shutdown()
            except Exception:
                pass

    def work(rank: int) -> None:
        try:
            ep = endpoint_init("inproc", rank, group)
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
            comm.barrier().result(timeout=join_timeout_s)
        except BaseException as e:
            errors.append((rank, e))
            abort_all()
        finally:
            ep.shutdown()

    threads = [threading.Thread(target=work, args=(r,), daemon=True, name=f"rank-{r}")
               for r in range(world_size)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=join_timeout_s)
    alive = [t.name for t in threads if t.is_alive()]
    if alive:
        abort_all()
        raise TimeoutError(f"rank threads did not finish: {alive}")
    if errors:
        rank, err = errors[0]  # append order is chronological
        raise RuntimeError(f"rank {rank} failed: {err!r}") from err
    return results
