"""
Collectives and the all-to-all / N-scatter equivalence
======================================================

Scatter, gather, barrier, and all-to-all run over any endpoint.  The data
movement of one all-to-all is exactly that of N scatters, one rooted at
each rank -- which is what lets a pipeline swap one for the other.
"""

from parcelfft import run_inproc

WORLD = 4


def chunk(sender, receiver):
    return f"[{sender}->{receiver}]".encode()


def demo(comm):
    # scatter: root 0 hands every rank its slice
    mine = comm.scatter(0, [chunk(0, r) for r in range(WORLD)] if comm.rank == 0 else None)
    got = mine.result(timeout=10)

    # gather brings the slices back
    collected = comm.gather(0, got).result(timeout=10)

    # all-to-all vs the composition of four scatters
    chunks = [chunk(comm.rank, r) for r in range(WORLD)]
    via_a2a = comm.all_to_all(chunks).result(timeout=10)
    handles = [comm.scatter(root, chunks if root == comm.rank else None)
               for root in range(WORLD)]
    via_scatters = [h.result(timeout=10) for h in handles]

    comm.barrier().result(timeout=10)
    return got, collected, via_a2a == via_scatters, via_a2a


results = run_inproc(WORLD, demo)
print("scatter delivered:", [r[0] for r in results])
print("gather at root 0 :", results[0][1])
print("a2a == N scatters:", all(r[2] for r in results))
print("rank 2 received  :", results[2][3])
