"""Benchmark harness: chunk-size scaling, strong scaling, statistics, CSV.

Runtimes are taken with the rank-local monotonic clock; each run's duration
is the maximum across ranks (the slowest rank defines completion).  Per
configuration, 5 warmup repetitions run first and are excluded from the
records.  Summaries report the sample mean and a 95% confidence half-width
from Student's t with n-1 degrees of freedom.
"""

from __future__ import annotations

import math
import struct
import time
from dataclasses import dataclass

import numpy as np

from .collectives import Communicator
from .dist_fft import Decomposition, Slab, fft2_dist, random_complex_rows

DEFAULT_RUNS = 50
WARMUP_RUNS = 5

EXPERIMENT_CHUNK = "chunk"
EXPERIMENT_STRONG = "strong"

RUNS_HEADER = "experiment,transport,strategy,world_size,param,run_index,seconds"
SUMMARY_HEADER = "experiment,transport,strategy,world_size,param,runs,mean_seconds,ci95_half_width"

# Two-sided 95% Student-t quantiles, i.e. t(0.975, dof).  Gaps resolve to
# the nearest lower dof; the math.inf entry is the normal limit 1.9600.
T_TABLE_975 = {
    1: 12.7062, 2: 4.3027, 3: 3.1824, 4: 2.7764, 5: 2.5706,
    6: 2.4469, 7: 2.3646, 8: 2.3060, 9: 2.2622, 10: 2.2281,
    11: 2.2010, 12: 2.1788, 13: 2.1604, 14: 2.1448, 15: 2.1314,
    16: 2.1199, 17: 2.1098, 18: 2.1009, 19: 2.0930, 20: 2.0860,
    21: 2.0796, 22: 2.0739, 23: 2.0687, 24: 2.0639, 25: 2.0595,
    26: 2.0555, 27: 2.0518, 28: 2.0484, 29: 2.0452, 30: 2.0423,
    40: 2.0211, 49: 2.0096, 50: 2.0086, 60: 2.0003, 100: 1.9840,
    math.inf: 1.9600,
}
_T_KEYS = sorted(k for k in T_TABLE_975 if k is not math.inf)


def t_quantile_975(dof) -> float:
    """Embedded-table t(0.975, dof) with nearest-lower lookup for gaps."""
    if dof == math.inf:
        return T_TABLE_975[math.inf]
    if dof < 1:
        raise ValueError(f"dof must be >= 1, got {dof}")
    key = max(k for k in _T_KEYS if k <= dof)
    return T_TABLE_975[key]


@dataclass(frozen=True)
class BenchRecord:
    experiment: str
    transport: str
    strategy: str
    world_size: int
    param: int  # chunk bytes (chunk experiment) or matrix side (strong)
    run_index: int
    seconds: float


@dataclass(frozen=True)
class SummaryStat:
    mean_seconds: float
    ci95_half_width: float
    runs: int


def summarize(records) -> SummaryStat:
    """Sample mean and t-based 95% half-width (n-1 denominator stddev).

    Accepts BenchRecords or bare seconds; needs at least 2 samples.
    Identical samples give a half-width of exactly 0.
    """
    xs = [r.seconds if isinstance(r, BenchRecord) else float(r) for r in records]
    n = len(xs)
    if n < 2:
        raise ValueError(f"need at least 2 records to summarize, got {n}")
    mean = math.fsum(xs) / n
    if all(x == xs[0] for x in xs):
        return SummaryStat(mean_seconds=xs[0], ci95_half_width=0.0, runs=n)
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    half = t_quantile_975(n - 1) * math.sqrt(var) / math.sqrt(n)
    return SummaryStat(mean_seconds=mean, ci95_half_width=half, runs=n)


def summarize_by_config(records) -> list[tuple[tuple, SummaryStat]]:
    """Group records by (experiment, transport, strategy, world_size, param),
    in first-seen order, and summarize each group."""
    groups: dict[tuple, list[BenchRecord]] = {}
    for r in records:
        key = (r.experiment, r.transport, r.strategy, r.world_size, r.param)
        groups.setdefault(key, []).append(r)
    return [(key, summarize(rs)) for key, rs in groups.items()]


def _fmt(x: float) -> str:
    # Decimal notation, 17 significant digits: parses back to the same float.
    return np.format_float_positional(float(x), precision=17, unique=False, fractional=False)


def write_csv(records, summaries, path) -> tuple[str, str]:
    """Emit ``<path>.runs.csv`` and ``<path>.summary.csv`` (LF newlines)."""
    runs_path = f"{path}.runs.csv"
    summary_path = f"{path}.summary.csv"
    with open(runs_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(RUNS_HEADER + "\n")
        for r in records:
            fh.write(f"{r.experiment},{r.transport},{r.strategy},{r.world_size},"
                     f"{r.param},{r.run_index},{_fmt(r.seconds)}\n")
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for (experiment, transport, strategy, world_size, param), stat in summaries:
            fh.write(f"{experiment},{transport},{strategy},{world_size},{param},"
                     f"{stat.runs},{_fmt(stat.mean_seconds)},{_fmt(stat.ci95_half_width)}\n")
    return runs_path, summary_path


def read_runs_csv(path) -> list[BenchRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != RUNS_HEADER:
            raise ValueError(f"unexpected runs header: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            e, t, s, w, p, i, sec = line.strip().split(",")
            records.append(BenchRecord(e, t, s, int(w), int(p), int(i), float(sec)))
    return records


def read_summary_csv(path) -> list[tuple[tuple, SummaryStat]]:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != SUMMARY_HEADER:
            raise ValueError(f"unexpected summary header: {header!r}")
        for line in fh:
            if not line.strip():
                continue
            e, t, s, w, p, n, mean, hw = line.strip().split(",")
            rows.append(((e, t, s, int(w), int(p)),
                         SummaryStat(float(mean), float(hw), int(n))))
    return rows


def _max_across_ranks(comm: Communicator, value: float) -> float:
    """Gather per-rank values to rank 0, reduce with max, scatter back."""
    gathered = comm.gather(0, struct.pack("<d", value)).result()
    if comm.rank == 0:
        m = max(struct.unpack("<d", g)[0] for g in gathered)
        comm.scatter(0, [struct.pack("<d", m)] * comm.world_size).result()
        return m
    return struct.unpack("<d", comm.scatter(0).result())[0]


def bench_chunk_size(comm: Communicator, sizes, runs: int = DEFAULT_RUNS,
                     warmup: int = WARMUP_RUNS) -> list[BenchRecord]:
    """Two-node chunk-size sweep: two simultaneous one-way channels.

    Per run, rank 0 roots a scatter of [empty, payload] while rank 1 roots
    a scatter of [payload, empty], so each direction carries exactly one
    payload; both ranks await both handles and the slower rank's duration
    is recorded.
    """
    if comm.world_size != 2:
        raise ValueError(f"chunk-size benchmark needs exactly 2 ranks, got {comm.world_size}")
    transport = comm.endpoint.backend_name
    records = []
    for size in sizes:
        payload = bytes(size)
        for it in range(warmup + runs):
            comm.barrier().result()
            t0 = time.perf_counter()
            if comm.rank == 0:
                h0 = comm.scatter(0, [b"", payload])
                h1 = comm.scatter(1)
            else:
                h0 = comm.scatter(0)
                h1 = comm.scatter(1, [payload, b""])
            h0.result()
            h1.result()
            dt = _max_across_ranks(comm, time.perf_counter() - t0)
            if it >= warmup:
                records.append(BenchRecord(EXPERIMENT_CHUNK, transport, "scatter",
                                           2, int(size), it - warmup, dt))
    return records


def bench_strong(comm: Communicator, side: int, strategy: str, runs: int = DEFAULT_RUNS,
                 warmup: int = WARMUP_RUNS, seed: int = 1) -> list[BenchRecord]:
    """Strong scaling: time fft2_dist on a fixed side x side problem.

    The slab is rebuilt from seed + run index before each run; only the
    five-phase pipeline is inside the timer.
    """
    d = Decomposition(comm.world_size, side, side)
    transport = comm.endpoint.backend_name
    records = []
    for it in range(warmup + runs):
        run_index = it - warmup
        slab = Slab(d, comm.rank, random_complex_rows(
            seed + max(run_index, 0), side, comm.rank * d.local_rows, d.local_rows))
        comm.barrier().result()
        t0 = time.perf_counter()
        fft2_dist(comm, slab, strategy)
        dt = _max_across_ranks(comm, time.perf_counter() - t0)
        if it >= warmup:
            records.append(BenchRecord(EXPERIMENT_STRONG, transport, strategy,
                                       comm.world_size, side, run_index, dt))
    return records
