"""Distributed 2D FFT over row-block (slab) decomposed data.

The pipeline per transform is: row FFTs on the local slab, chunking into
per-destination column blocks, communication (one synchronized all-to-all
or P overlapped scatters), transposition of received chunks, then row FFTs
along the second dimension.  The output slab is left in transposed layout
(second dimension major): local element (u, v) of rank r holds spectrum
element F(v, r*C/P + u) of the standard 2D DFT F of the global input.

Every phase is timestamped with the rank-local monotonic clock as a
:class:`PhaseEvent`; traces are only ever compared within one rank.
"""

from __future__ import annotations

import struct
import time
from concurrent.futures import as_completed
from dataclasses import dataclass

import numpy as np

from .collectives import Communicator
from .fft_kernel import fft_rows, fft2_serial, is_pow2, max_rel_error

BYTES_PER_SAMPLE = 16  # two little-endian IEEE-754 binary64 floats: re, im

STRATEGY_ALLTOALL = "alltoall"
STRATEGY_SCATTER = "scatter"
STRATEGIES = (STRATEGY_ALLTOALL, STRATEGY_SCATTER)

PHASE_FFT1 = "fft1"
PHASE_CHUNK = "chunk"
PHASE_COMM = "comm"
PHASE_TRANSPOSE = "transpose"
PHASE_FFT2 = "fft2"


@dataclass(frozen=True)
class Decomposition:
    """Row-block split of a global rows x cols matrix over world_size ranks.

    world_size must divide both dimensions so chunks are exactly equal."""

    world_size: int
    rows: int
    cols: int

    def __post_init__(self):
        if self.world_size < 1:
            raise ValueError(f"world_size must be >= 1, got {self.world_size}")
        if not (is_pow2(self.rows) and is_pow2(self.cols)):
            raise ValueError(f"dimensions must be powers of two, got {self.rows}x{self.cols}")
        if self.rows % self.world_size or self.cols % self.world_size:
            raise ValueError(
                f"world_size {self.world_size} must divide rows {self.rows} and cols {self.cols}"
            )

    @property
    def local_rows(self) -> int:
        return self.rows // self.world_size

    @property
    def chunk_cols(self) -> int:
        return self.cols // self.world_size

    @property
    def chunk_bytes(self) -> int:
        return self.local_rows * self.chunk_cols * BYTES_PER_SAMPLE

    def transposed(self) -> "Decomposition":
        return Decomposition(self.world_size, self.cols, self.rows)


@dataclass
class Slab:
    """One rank's contiguous row block of the global matrix (row-major)."""

    decomp: Decomposition
    owner: int
    data: np.ndarray

    def __post_init__(self):
        if not 0 <= self.owner < self.decomp.world_size:
            raise ValueError(f"owner {self.owner} out of range")
        expected = (self.decomp.local_rows, self.decomp.cols)
        if self.data.shape != expected:
            raise ValueError(f"slab data shape {self.data.shape}, expected {expected}")
        if self.data.dtype != np.complex128:
            self.data = self.data.astype(np.complex128)

    @property
    def row_offset(self) -> int:
        return self.owner * self.decomp.local_rows


@dataclass(frozen=True)
class PhaseEvent:
    phase: str
    rank: int
    t_start: float
    t_end: float


def serialize_samples(a: np.ndarray) -> bytes:
    """Row-major little-endian (re, im) float64 pairs."""
    return np.ascontiguousarray(a).astype("<c16", copy=False).tobytes()


def deserialize_samples(buf, rows: int, cols: int) -> np.ndarray:
    expected = rows * cols * BYTES_PER_SAMPLE
    if len(buf) != expected:
        raise ValueError(f"sample buffer is {len(buf)} bytes, expected {expected}")
    return np.frombuffer(buf, dtype="<c16").reshape(rows, cols).astype(np.complex128)


def chunk_rows(s: Slab) -> list[bytes]:
    """Split the slab column-wise into world_size equal blocks; chunk j
    (columns [j*C/P, (j+1)*C/P) of every local row) is destined for rank j."""
    w = s.decomp.chunk_cols
    return [serialize_samples(s.data[:, j * w:(j + 1) * w]) for j in range(s.decomp.world_size)]


def empty_transposed_slab(decomp: Decomposition, owner: int) -> Slab:
    """Destination slab for the transposition phase: C/P rows of length R."""
    t = decomp.transposed()
    return Slab(t, owner, np.empty((t.local_rows, t.cols), dtype=np.complex128))


def transpose_chunk_into(dest: Slab, chunk, source: int) -> None:
    """Place one received chunk into the transposed destination slab.

    Element (i, j) of the chunk from rank ``source`` (i over that rank's
    R/P local rows, j over this rank's C/P columns) lands at destination
    (row j, column source*R/P + i).  Chunks from distinct sources write
    disjoint column bands, so placements commute and may run concurrently.
    """
    t = dest.decomp  # transposed layout: rows = C/P, cols = R
    if not 0 <= source < t.world_size:
        raise ValueError(f"source rank {source} out of range")
    src_rows = t.cols // t.world_size
    src_cols = t.local_rows
    expected = src_rows * src_cols * BYTES_PER_SAMPLE
    if len(chunk) != expected:
        raise ValueError(f"chunk from rank {source} is {len(chunk)} bytes, expected {expected}")
    block = np.frombuffer(chunk, dtype="<c16").reshape(src_rows, src_cols)
    dest.data[:, source * src_rows:(source + 1) * src_rows] = block.T


def comm_volume_expected(d: Decomposition) -> int:
    """Total off-rank payload bytes of one communication step over all
    ranks: (1 - 1/P) * R * C * 16, exact."""
    total = d.rows * d.cols * BYTES_PER_SAMPLE
    return total * (d.world_size - 1) // d.world_size


def fft2_dist(comm: Communicator, s: Slab, strategy: str) -> tuple[Slab, list[PhaseEvent]]:
    """Distributed 2D FFT of the slab-decomposed global matrix.

    Returns this rank's slab of the transposed spectrum plus the phase
    trace.  With ``alltoall`` the single synchronized collective must
    complete before any transposition starts; with ``scatter`` all P
    scatters are issued concurrently and each chunk is transposed the
    moment it arrives, overlapping transposition with the remaining
    communication.  Both strategies perform identical arithmetic in
    identical per-element order, so their outputs match bit for bit.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if s.decomp.world_size != comm.world_size:
        raise ValueError("slab decomposition does not match communicator world size")
    if s.owner != comm.rank:
        raise ValueError(f"slab owner {s.owner} is not this rank {comm.rank}")

    rank = comm.rank
    world = comm.world_size
    clock = time.perf_counter
    events: list[PhaseEvent] = []

    def record(phase: str, t0: float, t1: float) -> None:
        events.append(PhaseEvent(phase, rank, t0, t1))

    t0 = clock()
    spectra = fft_rows(s.data)
    record(PHASE_FFT1, t0, clock())

    t0 = clock()
    chunks = chunk_rows(Slab(s.decomp, rank, spectra))
    record(PHASE_CHUNK, t0, clock())

    dest = empty_transposed_slab(s.decomp, rank)

    if strategy == STRATEGY_ALLTOALL:
        t0 = clock()
        parts = comm.all_to_all(chunks).result()
        record(PHASE_COMM, t0, clock())
        for src in range(world):
            t0 = clock()
            transpose_chunk_into(dest, parts[src], src)
            record(PHASE_TRANSPOSE, t0, clock())
    else:
        issued: dict = {}
        starts: dict[int, float] = {}
        for root in range(world):
            starts[root] = clock()
            handle = comm.scatter(root, chunks if root == rank else None)
            issued[handle] = root
        for handle in as_completed(issued):
            root = issued[handle]
            part = handle.result()
            record(PHASE_COMM, starts[root], clock())
            t0 = clock()
            transpose_chunk_into(dest, part, root)
            record(PHASE_TRANSPOSE, t0, clock())

    t0 = clock()
    dest.data = fft_rows(dest.data)
    record(PHASE_FFT2, t0, clock())
    return dest, events


# --- deterministic input generation -------------------------------------

_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_MIX2 = np.uint64(0x94D049BB133111EB)
_UNIT = 2.0 ** -53


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _SM_MIX1
    z ^= z >> np.uint64(27)
    z *= _SM_MIX2
    z ^= z >> np.uint64(31)
    return z


def _unit_doubles(seed: int, start: int, count: int) -> np.ndarray:
    """Draws ``count`` doubles in [0, 1) from the counter-mode splitmix64
    stream of ``seed``, starting at stream position ``start``.

    Draw i is ``mix64(seed + (i+1)*GAMMA)`` with the standard splitmix64
    finalizer, mapped to a double via the top 53 bits.  Pure 64-bit integer
    arithmetic (mod 2^64) plus one exact float scaling, so streams are
    bit-identical across platforms.
    """
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    state = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _SM_GAMMA
    return (_mix64(state) >> np.uint64(11)).astype(np.float64) * _UNIT


def random_complex_rows(seed: int, cols: int, row_start: int, row_count: int) -> np.ndarray:
    """Rows [row_start, row_start+row_count) of the seeded global matrix.

    Element (g, c) draws its re/im parts from stream positions
    2*(g*cols + c) and 2*(g*cols + c) + 1, each uniform in [-1, 1), so any
    row block of the same seed is consistent with the full matrix.
    """
    count = row_count * cols * 2
    u = _unit_doubles(seed, row_start * cols * 2, count)
    vals = 2.0 * u - 1.0
    return (vals[0::2] + 1j * vals[1::2]).reshape(row_count, cols)


def random_complex_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    return random_complex_rows(seed, cols, 0, rows)


# --- correctness harness -------------------------------------------------

def verify_dist_matrix(comm: Communicator, rows: int, cols: int, global_matrix, strategy: str) -> float:
    """Run the distributed transform on an explicit global matrix (given on
    rank 0, None elsewhere) and compare against the serial 2D FFT.

    Rank 0 scatters row blocks, the pipeline runs, slabs are gathered back,
    untransposed, and checked; every rank returns the max relative error.
    """
    d = Decomposition(comm.world_size, rows, cols)
    world = comm.world_size
    lr = d.local_rows
    if comm.rank == 0:
        g = np.asarray(global_matrix, dtype=np.complex128)
        if g.shape != (rows, cols):
            raise ValueError(f"global matrix shape {g.shape}, expected {(rows, cols)}")
        blocks = [serialize_samples(g[r * lr:(r + 1) * lr]) for r in range(world)]
        my_block = comm.scatter(0, blocks).result()
    else:
        my_block = comm.scatter(0).result()
    slab = Slab(d, comm.rank, deserialize_samples(my_block, lr, cols))
    out, _ = fft2_dist(comm, slab, strategy)
    gathered = comm.gather(0, serialize_samples(out.data)).result()
    if comm.rank == 0:
        t = d.transposed()
        spectrum_t = np.vstack(
            [deserialize_samples(gathered[r], t.local_rows, t.cols) for r in range(world)]
        )
        err = max_rel_error(spectrum_t.T, fft2_serial(g))
        comm.scatter(0, [struct.pack("<d", err)] * world).result()
        return err
    packed = comm.scatter(0).result()
    return struct.unpack("<d", packed)[0]


def verify_dist(comm: Communicator, rows: int, cols: int, strategy: str, seed: int) -> float:
    """verify_dist_matrix on a pseudo-random global matrix built from seed."""
    g = random_complex_matrix(rows, cols, seed) if comm.rank == 0 else None
    return verify_dist_matrix(comm, rows, cols, g, strategy)
