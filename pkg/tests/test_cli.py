"""CLI surface: subcommands, context flags, exit codes, spawned tcp ranks."""

import subprocess
import sys

import pytest

from conftest import free_ports

from parcelfft.bench import read_runs_csv, read_summary_csv
from parcelfft.cli import main, parse_sizes


class TestParseSizes:
    def test_power_range(self):
        assert parse_sizes("2^3..2^6") == [8, 16, 32, 64]

    def test_comma_list_mixed(self):
        assert parse_sizes("1024, 2^11,4096") == [1024, 2048, 4096]

    def test_default_sweep_has_17_points(self):
        sizes = parse_sizes("2^10..2^26")
        assert len(sizes) == 17
        assert sizes[0] == 1024 and sizes[-1] == 64 * 1024 * 1024

    def test_bad_specs_rejected(self):
        for spec in ("2^10..2^9", "3..8", "", "abc"):
            with pytest.raises(ValueError):
                parse_sizes(spec)


class TestExitCodes:
    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 2

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["fft", "--side", "8", "--nope"]) == 2

    def test_tcp_without_hostfile_is_usage_error(self, capsys):
        assert main(["--transport", "tcp", "fft", "--side", "8"]) == 2

    def test_rank_flag_rejected_for_inproc(self, capsys):
        assert main(["--rank", "0", "fft", "--side", "8"]) == 2

    def test_side_not_divisible_is_usage_error(self, capsys):
        assert main(["--ranks", "3", "fft", "--side", "8"]) == 2

    def test_unreachable_tcp_peer_is_transport_failure(self, tmp_path, capsys):
        ports = free_ports(2)
        hostfile = tmp_path / "hosts"
        hostfile.write_text(f"0 127.0.0.1:{ports[0]}\n1 127.0.0.1:{ports[1]}\n")
        # rank 0 dials rank 1, which never starts
        import parcelfft.transport.tcp as tcp_mod
        orig_attempts, orig_backoff = tcp_mod._CONNECT_ATTEMPTS, tcp_mod._BACKOFF_INITIAL_S
        tcp_mod._CONNECT_ATTEMPTS, tcp_mod._BACKOFF_INITIAL_S = 2, 0.01
        try:
            code = main(["--transport", "tcp", "--hostfile", str(hostfile), "--rank", "0",
                         "fft", "--side", "8"])
        finally:
            tcp_mod._CONNECT_ATTEMPTS, tcp_mod._BACKOFF_INITIAL_S = orig_attempts, orig_backoff
        assert code == 3


class TestFftCommand:
    def test_runs_and_prints_phases(self, capsys):
        assert main(["--ranks", "2", "fft", "--side", "16", "--strategy", "scatter"]) == 0
        out = capsys.readouterr().out
        assert "side=16" in out and "fft1" in out

    def test_verify_passes_at_small_size(self, capsys):
        code = main(["--ranks", "2", "fft", "--side", "16", "--strategy", "alltoall",
                     "--seed", "3", "--verify"])
        assert code == 0
        assert "max relative error" in capsys.readouterr().out

    def test_verify_with_latency_injection(self, capsys):
        code = main(["--ranks", "2", "--inject-latency", "5",
                     "fft", "--side", "16", "--strategy", "scatter", "--verify"])
        assert code == 0


class TestBenchCommands:
    def test_bench_chunk_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "chunk"
        code = main(["--ranks", "2", "bench-chunk", "--sizes", "64,256",
                     "--runs", "3", "--out", str(out)])
        assert code == 0
        records = read_runs_csv(f"{out}.runs.csv")
        assert len(records) == 6
        summary = read_summary_csv(f"{out}.summary.csv")
        assert len(summary) == 2

    def test_bench_strong_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "strong"
        code = main(["--ranks", "2", "bench-strong", "--side", "32",
                     "--strategy", "alltoall", "--runs", "4", "--out", str(out)])
        assert code == 0
        records = read_runs_csv(f"{out}.runs.csv")
        assert len(records) == 4
        assert all(r.experiment == "strong" and r.world_size == 2 for r in records)


class TestTcpProcesses:
    def test_two_rank_verify_over_loopback(self, tmp_path):
        ports = free_ports(2)
        hostfile = tmp_path / "hosts"
        hostfile.write_text("".join(f"{r} 127.0.0.1:{p}\n" for r, p in enumerate(ports)))
        procs = [
            subprocess.Popen(
                [sys.executable, "-m", "parcelfft.cli", "--transport", "tcp",
                 "--hostfile", str(hostfile), "--rank", str(r),
                 "fft", "--side", "16", "--strategy", "scatter", "--verify"],
                stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
            for r in range(2)
        ]
        outs = [p.communicate(timeout=90) for p in procs]
        assert [p.returncode for p in procs] == [0, 0], outs
        assert "max relative error" in outs[0][0]
