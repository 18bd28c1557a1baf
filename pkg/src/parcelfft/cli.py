"""Command-line driver.

One binary, three subcommands, shared context flags::

    parcelfft [--transport {inproc,tcp}] [--ranks P] [--hostfile F]
              [--rank R] [--inject-latency MS] <command> ...

    fft          --side S --strategy {alltoall,scatter} --seed X [--verify]
    bench-chunk  --sizes 2^10..2^26 --runs 50 --out PATH
    bench-strong --side S --strategy {alltoall,scatter} --runs 50 --out PATH

With the inproc transport the process spawns ``--ranks`` worker threads;
with tcp each rank is its own process, pointed at the shared hostfile via
``--rank``.  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 transport failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bench import (
    DEFAULT_RUNS,
    bench_chunk_size,
    bench_strong,
    summarize_by_config,
    write_csv,
)
from .collectives import Communicator
from .dist_fft import (
    STRATEGIES,
    Decomposition,
    Slab,
    fft2_dist,
    random_complex_rows,
    verify_dist,
)
from .fft_kernel import is_pow2
from .runner import run_inproc
from .transport import TransportError, delay_wrap, endpoint_init, parse_hostfile

VERIFY_LIMIT = 1e-8

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_TRANSPORT = 3


def parse_sizes(spec: str) -> list[int]:
    """Size sweeps: '2^10..2^26' (all powers of two in range) or a comma
    list of byte counts, each either plain or in 'base^exp' form."""

    def one(token: str) -> int:
        token = token.strip()
        if "^" in token:
            base, _, exp = token.partition("^")
            value = int(base) ** int(exp)
        else:
            value = int(token)
        if value < 0:
            raise ValueError(f"negative size {value}")
        return value

    if ".." in spec:
        lo_s, _, hi_s = spec.partition("..")
        lo, hi = one(lo_s), one(hi_s)
        if not (is_pow2(lo) and is_pow2(hi) and lo <= hi):
            raise ValueError(f"range endpoints must be ascending powers of two, got {spec!r}")
        return [1 << k for k in range(lo.bit_length() - 1, hi.bit_length())]
    sizes = [one(t) for t in spec.split(",") if t.strip()]
    if not sizes:
        raise ValueError(f"no sizes in {spec!r}")
    return sizes


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="parcelfft",
        description="Distributed 2D FFT benchmark over pluggable rank-to-rank transports.",
    )
    p.add_argument("--transport", choices=("inproc", "tcp"), default="inproc",
                   help="communication backend (default: inproc)")
    p.add_argument("--ranks", type=int, default=1, metavar="P",
                   help="world size; inproc spawns P worker threads (default: 1)")
    p.add_argument("--hostfile", metavar="F",
                   help="tcp rendezvous: one '<rank> <host>:<port>' line per rank")
    p.add_argument("--rank", type=int, metavar="R",
                   help="this process's rank (tcp only)")
    p.add_argument("--inject-latency", type=float, default=0.0, metavar="MS",
                   help="defer every message by at least MS milliseconds")

    sub = p.add_subparsers(dest="command", required=True)

    fft = sub.add_parser("fft", help="run one distributed transform")
    fft.add_argument("--side", type=int, required=True, help="matrix side (power of two)")
    fft.add_argument("--strategy", choices=STRATEGIES, default="alltoall")
    fft.add_argument("--seed", type=int, default=1)
    fft.add_argument("--verify", action="store_true",
                     help="compare against the serial transform; exit 1 above 1e-8")

    chunk = sub.add_parser("bench-chunk", help="two-rank chunk-size scaling sweep")
    chunk.add_argument("--sizes", default="2^10..2^26",
                       help="byte sizes, e.g. '2^10..2^26' or '1024,4096' (default: 2^10..2^26)")
    chunk.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    chunk.add_argument("--out", required=True, help="CSV base path")

    strong = sub.add_parser("bench-strong", help="strong-scaling sweep at fixed problem size")
    strong.add_argument("--side", type=int, required=True)
    strong.add_argument("--strategy", choices=STRATEGIES, default="alltoall")
    strong.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    strong.add_argument("--seed", type=int, default=1)
    strong.add_argument("--out", required=True, help="CSV base path")
    return p


def _phase_totals(events) -> dict[str, float]:
    totals: dict[str, float] = {}
    for ev in events:
        totals[ev.phase] = totals.get(ev.phase, 0.0) + (ev.t_end - ev.t_start)
    return totals


def _make_body(args):
    """Build the per-rank work function; only rank 0 prints or writes."""

    def emit_csv(comm: Communicator, records) -> None:
        if comm.rank == 0:
            runs_path, summary_path = write_csv(records, summarize_by_config(records), args.out)
            print(f"wrote {runs_path}")
            print(f"wrote {summary_path}")

    if args.command == "fft":
        def body(comm: Communicator):
            if args.verify:
                err = verify_dist(comm, args.side, args.side, args.strategy, args.seed)
                if comm.rank == 0:
                    print(f"max relative error: {err:.6e} (limit {VERIFY_LIMIT:.0e})")
                return err
            d = Decomposition(comm.world_size, args.side, args.side)
            slab = Slab(d, comm.rank, random_complex_rows(
                args.seed, args.side, comm.rank * d.local_rows, d.local_rows))
            t0 = time.perf_counter()
            _, events = fft2_dist(comm, slab, args.strategy)
            dt = time.perf_counter() - t0
            if comm.rank == 0:
                phases = " ".join(f"{k}={v:.6f}s" for k, v in sorted(_phase_totals(events).items()))
                print(f"side={args.side} P={comm.world_size} strategy={args.strategy} "
                      f"total={dt:.6f}s {phases}")
            return None
        return body

    if args.command == "bench-chunk":
        sizes = parse_sizes(args.sizes)

        def body(comm: Communicator):
            records = bench_chunk_size(comm, sizes, runs=args.runs)
            emit_csv(comm, records)
            return None
        return body

    def body(comm: Communicator):
        records = bench_strong(comm, args.side, args.strategy, runs=args.runs, seed=args.seed)
        emit_csv(comm, records)
        return None
    return body


def _run(args) -> int:
    latency_s = args.inject_latency / 1000.0
    if latency_s < 0:
        raise ValueError("--inject-latency must be >= 0")
    body = _make_body(args)

    if args.transport == "inproc":
        if args.rank is not None:
            raise ValueError("--rank only applies to the tcp transport")
        if args.ranks < 1:
            raise ValueError("--ranks must be >= 1")
        results = run_inproc(args.ranks, body, inject_latency_s=latency_s)
        result0 = results[0]
    else:
        if not args.hostfile or args.rank is None:
            raise ValueError("tcp transport needs --hostfile and --rank")
        table = parse_hostfile(args.hostfile)
        ep = endpoint_init("tcp", args.rank, table)
        if latency_s > 0:
            ep = delay_wrap(ep, latency_s)
        comm = Communicator(ep)
        try:
            result0 = body(comm)
            comm.barrier().result()
        finally:
            ep.shutdown()

    if args.command == "fft" and args.verify and result0 is not None and result0 > VERIFY_LIMIT:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _run(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TransportError as e:
        print(f"transport failure: {e}", file=sys.stderr)
        return EXIT_TRANSPORT
    except RuntimeError as e:
        cause = e.__cause__
        if isinstance(cause, TransportError):
            print(f"transport failure: {e}", file=sys.stderr)
            return EXIT_TRANSPORT
        if isinstance(cause, ValueError):
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
