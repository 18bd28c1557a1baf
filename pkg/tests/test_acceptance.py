"""Acceptance suite: one test per criterion, each printing a PASS line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; the whole suite is also part of the default pytest run.
"""

import math
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import endpoint_world, free_ports, run_world

from parcelfft.bench import DEFAULT_RUNS, read_runs_csv, read_summary_csv, summarize
from parcelfft.cli import _build_parser
from parcelfft.dist_fft import (
    Decomposition,
    PHASE_COMM,
    PHASE_TRANSPOSE,
    Slab,
    comm_volume_expected,
    fft2_dist,
    random_complex_matrix,
    random_complex_rows,
    serialize_samples,
    verify_dist,
)
from parcelfft.fft_kernel import dft_naive, fft_pow2, max_rel_error
from parcelfft.transport import Frame, FrameDecodeError, HEADER_SIZE, decode_frame, encode_frame


def _announce(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


def test_fft_oracle_suite():
    t0 = time.perf_counter()
    worst = 0.0
    sizes = [1 << k for k in range(13)]  # 1 .. 4096
    for n in sizes:
        for seed in range(20):
            rng = np.random.default_rng(seed * 1000 + n)
            x = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
            worst = max(worst, max_rel_error(fft_pow2(x), dft_naive(x)))
    assert worst <= 1e-10

    parseval_worst = linearity_worst = 0.0
    for n in sizes:
        for seed in range(3):
            rng = np.random.default_rng(seed + 7 * n)
            x = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
            y = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
            X = fft_pow2(x)
            energy_in = float(np.sum(np.abs(x) ** 2))
            energy_out = float(np.sum(np.abs(X) ** 2)) / n
            if energy_out > 0:
                parseval_worst = max(parseval_worst, abs(energy_in - energy_out) / energy_out)
            a, b = 1.25 - 0.5j, -0.3 + 2.0j
            lhs = fft_pow2(a * x + b * y)
            rhs = a * X + b * fft_pow2(y)
            denom = float(np.max(np.abs(rhs))) or 1.0
            linearity_worst = max(linearity_worst, float(np.max(np.abs(lhs - rhs))) / denom)
    assert parseval_worst <= 1e-10
    assert linearity_worst <= 1e-10

    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0
    _announce("fft-oracle-suite",
              f"worst {worst:.2e}, parseval {parseval_worst:.2e}, "
              f"linearity {linearity_worst:.2e}, {elapsed:.1f}s")


def test_distributed_correctness_grid():
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for transport in ("inproc", "tcp"):
        for side in (8, 16, 32, 64):
            for world in (1, 2, 4):
                for strategy in ("alltoall", "scatter"):
                    seed = side + world
                    errs = run_world(
                        transport, world,
                        lambda comm: verify_dist(comm, side, side, strategy, seed))
                    worst = max(worst, max(errs))
                    count += 1
    assert worst <= 1e-10
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _announce("distributed-correctness",
              f"{count} configs, worst {worst:.2e}, {elapsed:.1f}s")


def test_strategy_equality_bitwise():
    rng = random.Random(2024)
    checked = 0
    for _ in range(12):
        world = rng.choice([1, 2, 4, 8])
        rows = world << rng.randint(0, 3)
        cols = world << rng.randint(0, 3)
        seed = rng.randint(0, 10**6)
        d = Decomposition(world, rows, cols)
        g = random_complex_matrix(rows, cols, seed)

        def body(comm):
            lr = d.local_rows
            block = g[comm.rank * lr:(comm.rank + 1) * lr].copy()
            a, _ = fft2_dist(comm, Slab(d, comm.rank, block.copy()), "alltoall")
            s, _ = fft2_dist(comm, Slab(d, comm.rank, block.copy()), "scatter")
            return serialize_samples(a.data), serialize_samples(s.data)

        for a_bytes, s_bytes in run_world("inproc", world, body):
            assert a_bytes == s_bytes
        checked += 1
    assert checked >= 10
    _announce("strategy-equality", f"{checked} random configs bitwise identical")


def test_comm_volume_formula_exact():
    assert comm_volume_expected(Decomposition(4, 8, 8)) == 768
    results = []
    for world in (2, 4, 8):
        side = 16
        d = Decomposition(world, side, side)
        g = random_complex_matrix(side, side, world)
        for strategy in ("alltoall", "scatter"):

            def body(comm):
                lr = d.local_rows
                before = comm.endpoint.counters().off_rank_payload_sent
                slab = Slab(d, comm.rank, g[comm.rank * lr:(comm.rank + 1) * lr].copy())
                fft2_dist(comm, slab, strategy)
                comm.barrier().result(timeout=60)
                return comm.endpoint.counters().off_rank_payload_sent - before

            measured = sum(run_world("inproc", world, body))
            expected = comm_volume_expected(d)
            assert measured == expected
            results.append(f"P={world}/{strategy}:{measured}")
    _announce("comm-volume-formula", "; ".join(results) + "; P=4 8x8 = 768")


def test_alltoall_equals_scatter_composition():
    cases = 0
    for world in (1, 2, 3, 4, 8):
        def body(comm, world=world):
            rng = random.Random(1000 + comm.rank)
            ok = True
            for case in range(25):
                chunks = [rng.randbytes(rng.randint(0, 300)) for _ in range(world)]
                via_a2a = comm.all_to_all(chunks).result(timeout=60)
                handles = [comm.scatter(root, chunks if root == comm.rank else None)
                           for root in range(world)]
                via_scatter = [h.result(timeout=60) for h in handles]
                ok = ok and via_a2a == via_scatter
            return ok

        assert all(run_world("inproc", world, body))
        cases += 25
    assert cases >= 100
    _announce("alltoall-equals-n-scatters", f"{cases} cases over worlds 1,2,3,4,8")


def test_overlap_and_synchronization_traces():
    world, latency = 4, 0.05
    d = Decomposition(world, 16, 16)
    g = random_complex_matrix(16, 16, 17)

    def make_body(strategy):
        def body(comm):
            lr = d.local_rows
            slab = Slab(d, comm.rank, g[comm.rank * lr:(comm.rank + 1) * lr].copy())
            _, events = fft2_dist(comm, slab, strategy)
            return events
        return body

    for rep in range(10):
        per_rank = run_world("inproc", world, make_body("scatter"), inject_latency_s=latency)
        overlapped = 0
        for events in per_rank:
            last_comm_end = max(e.t_end for e in events if e.phase == PHASE_COMM)
            if any(e.t_start < last_comm_end for e in events if e.phase == PHASE_TRANSPOSE):
                overlapped += 1
        assert overlapped >= 1, f"scatter strategy showed no overlap in repetition {rep}"

        per_rank = run_world("inproc", world, make_body("alltoall"), inject_latency_s=latency)
        for events in per_rank:
            comm_end = max(e.t_end for e in events if e.phase == PHASE_COMM)
            for e in events:
                if e.phase == PHASE_TRANSPOSE:
                    assert e.t_start >= comm_end, f"alltoall overlapped in repetition {rep}"
    _announce("overlap-and-sync-traces",
              "10/10 repetitions: scatter overlaps, alltoall never does")


def test_wire_protocol_round_trip():
    rng = random.Random(99)
    for _ in range(1000):
        f = Frame(
            src=rng.randrange(2**32),
            dst=rng.randrange(2**32),
            tag=rng.randrange(2**64),
            payload=rng.randbytes(rng.randint(0, 512)),
        )
        raw = encode_frame(f)
        assert len(raw) == HEADER_SIZE + len(f.payload) == 29 + len(f.payload)
        assert decode_frame(raw) == f

    good = encode_frame(Frame(src=1, dst=2, tag=3, payload=b"payload"))
    corrupted = bytearray(good)
    corrupted[0] ^= 0x01
    with pytest.raises(FrameDecodeError):
        decode_frame(bytes(corrupted))
    with pytest.raises(FrameDecodeError):
        decode_frame(good[:HEADER_SIZE - 3])
    with pytest.raises(FrameDecodeError):
        decode_frame(good[:-1])
    _announce("wire-protocol", "1000 round trips; bad magic and truncation rejected")


def test_benchmark_statistics():
    from parcelfft.bench import t_quantile_975

    assert t_quantile_975(49) == 2.0096

    s = summarize([1.0, 3.0])
    # hand evaluation: mean 2, stddev sqrt(2), hw = t(0.975,1)*sqrt(2)/sqrt(2)
    expected_hw = 12.7062 * math.sqrt(2.0) / math.sqrt(2.0)
    assert s.mean_seconds == 2.0
    assert s.ci95_half_width == pytest.approx(expected_hw, rel=1e-12)

    xs = [1.0 + 0.01 * i for i in range(50)]
    s50 = summarize(xs)
    mean = math.fsum(xs) / 50
    sd = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / 49)
    assert s50.mean_seconds == pytest.approx(mean, rel=1e-15)
    assert s50.ci95_half_width == pytest.approx(2.0096 * sd / math.sqrt(50), rel=1e-12)

    assert summarize([0.125] * 50).ci95_half_width == 0.0

    assert DEFAULT_RUNS == 50
    parser = _build_parser()
    assert parser.parse_args(["bench-chunk", "--out", "x"]).runs == 50
    assert parser.parse_args(["bench-strong", "--side", "256", "--out", "x"]).runs == 50
    _announce("benchmark-statistics",
              "t(0.975,49)=2.0096; hand-computed CIs reproduced; default runs 50")


def test_end_to_end_smoke(tmp_path):
    t0 = time.perf_counter()
    out_inproc = tmp_path / "smoke_inproc"
    proc = subprocess.run(
        [sys.executable, "-m", "parcelfft.cli", "--transport", "inproc", "--ranks", "4",
         "bench-strong", "--side", "256", "--strategy", "scatter",
         "--runs", "50", "--out", str(out_inproc)],
        capture_output=True, text=True, timeout=110)
    assert proc.returncode == 0, proc.stderr
    records = read_runs_csv(f"{out_inproc}.runs.csv")
    assert len(records) == 50
    assert all(r.world_size == 4 and r.param == 256 and r.seconds > 0 for r in records)
    summary = read_summary_csv(f"{out_inproc}.summary.csv")
    assert len(summary) == 1 and summary[0][1].runs == 50

    ports = free_ports(2)
    hostfile = tmp_path / "hosts"
    hostfile.write_text("".join(f"{r} 127.0.0.1:{p}\n" for r, p in enumerate(ports)))
    out_tcp = tmp_path / "smoke_tcp"
    procs = [
        subprocess.Popen(
            [sys.executable, "-m", "parcelfft.cli", "--transport", "tcp",
             "--hostfile", str(hostfile), "--rank", str(r),
             "bench-strong", "--side", "256", "--strategy", "alltoall",
             "--runs", "50", "--out", str(out_tcp)],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        for r in range(2)
    ]
    outs = [p.communicate(timeout=110) for p in procs]
    assert [p.returncode for p in procs] == [0, 0], outs
    records = read_runs_csv(f"{out_tcp}.runs.csv")
    assert len(records) == 50
    assert all(r.transport == "tcp" and r.world_size == 2 for r in records)

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _announce("end-to-end-smoke", f"inproc P=4 and tcp P=2 CSVs well-formed, {elapsed:.1f}s")
