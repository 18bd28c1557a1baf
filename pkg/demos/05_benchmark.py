"""
Benchmark harness and statistics
================================

A miniature strong-scaling sweep: time the distributed transform at a
fixed problem size while varying the rank count, summarize with 95%
confidence half-widths, and emit the CSV pair the plotting frontend reads.
"""

import tempfile
from pathlib import Path

from parcelfft import bench_strong, run_inproc, summarize_by_config, write_csv

SIDE, RUNS = 128, 10

records = []
for world in (1, 2, 4):
    per_rank = run_inproc(
        world, lambda comm: bench_strong(comm, SIDE, "scatter", runs=RUNS, warmup=2))
    records.extend(per_rank[0])

summaries = summarize_by_config(records)
print(f"strong scaling at side {SIDE} ({RUNS} runs each):")
for (_, _, strategy, world, side), stat in summaries:
    print(f"  P={world}: mean {stat.mean_seconds * 1e3:7.3f} ms "
          f"+/- {stat.ci95_half_width * 1e3:6.3f} ms  ({strategy})")

out = Path(tempfile.mkdtemp()) / "demo"
runs_path, summary_path = write_csv(records, summaries, out)
print(f"\nwrote {runs_path}")
print(f"wrote {summary_path}")
print("feed the summary CSV to the plotting frontend: "
      f"node frontend/dist/cli.js strong --csv {summary_path} --out strong.png")
