"""Distributed 2D FFT benchmark framework.

A desk-scale harness for studying collective-communication strategies in
distributed FFTs: a pluggable rank-to-rank transport (in-process and TCP
backends with a bit-exact wire format), scatter/all-to-all/gather/barrier
collectives, a slab-decomposed 2D FFT pipeline with two interchangeable
communication strategies, and a benchmark suite with confidence-interval
statistics and CSV output.
"""

from .bench import (
    BenchRecord,
    SummaryStat,
    bench_chunk_size,
    bench_strong,
    read_runs_csv,
    read_summary_csv,
    summarize,
    summarize_by_config,
    t_quantile_975,
    write_csv,
)
from .collectives import Communicator, pack_tag
from .dist_fft import (
    Decomposition,
    PhaseEvent,
    Slab,
    chunk_rows,
    comm_volume_expected,
    empty_transposed_slab,
    fft2_dist,
    random_complex_matrix,
    random_complex_rows,
    transpose_chunk_into,
    verify_dist,
    verify_dist_matrix,
)
from .fft_kernel import dft_naive, fft2_serial, fft_pow2, fft_rows, max_rel_error
from .runner import run_inproc
from .transport import (
    ByteCounters,
    Endpoint,
    EndpointShutdownError,
    Frame,
    FrameDecodeError,
    HostTable,
    InprocGroup,
    PeerUnreachableError,
    TransportError,
    decode_frame,
    delay_wrap,
    encode_frame,
    endpoint_init,
    parse_hostfile,
)

__version__ = "0.1.0"

__all__ = [
    "BenchRecord",
    "ByteCounters",
    "Communicator",
    "Decomposition",
    "Endpoint",
    "EndpointShutdownError",
    "Frame",
    "FrameDecodeError",
    "HostTable",
    "InprocGroup",
    "PeerUnreachableError",
    "PhaseEvent",
    "Slab",
    "SummaryStat",
    "TransportError",
    "bench_chunk_size",
    "bench_strong",
    "chunk_rows",
    "comm_volume_expected",
    "decode_frame",
    "delay_wrap",
    "dft_naive",
    "empty_transposed_slab",
    "encode_frame",
    "endpoint_init",
    "fft2_dist",
    "fft2_serial",
    "fft_pow2",
    "fft_rows",
    "max_rel_error",
    "pack_tag",
    "parse_hostfile",
    "random_complex_matrix",
    "random_complex_rows",
    "read_runs_csv",
    "read_summary_csv",
    "run_inproc",
    "summarize",
    "summarize_by_config",
    "t_quantile_975",
    "transpose_chunk_into",
    "verify_dist",
    "verify_dist_matrix",
    "write_csv",
]
