"""
Hiding transposition behind communication
=========================================

With injected latency, the phase traces of the two strategies tell the
story: the synchronized all-to-all forces every transposition to wait for
the full exchange, while concurrent scatters let each chunk be transposed
the moment it lands.
"""

from parcelfft import Decomposition, Slab, fft2_dist, random_complex_rows, run_inproc

WORLD, SIDE, LATENCY = 4, 64, 0.05
DECOMP = Decomposition(WORLD, SIDE, SIDE)


def run(strategy):
    def body(comm):
        slab = Slab(DECOMP, comm.rank, random_complex_rows(
            1, SIDE, comm.rank * DECOMP.local_rows, DECOMP.local_rows))
        _, events = fft2_dist(comm, slab, strategy)
        return events

    return run_inproc(WORLD, body, inject_latency_s=LATENCY)


def timeline(events):
    t0 = min(e.t_start for e in events)
    return " ".join(f"{e.phase}@{(e.t_start - t0) * 1e3:05.1f}-{(e.t_end - t0) * 1e3:05.1f}ms"
                    for e in events)


for strategy in ("alltoall", "scatter"):
    events = run(strategy)[0]  # rank 0's trace
    print(f"\n{strategy} trace (rank 0):")
    print(" ", timeline(events))
    last_comm_end = max(e.t_end for e in events if e.phase == "comm")
    early = [e for e in events if e.phase == "transpose" and e.t_start < last_comm_end]
    print(f"  transposes started before the last communication finished: {len(early)}")
