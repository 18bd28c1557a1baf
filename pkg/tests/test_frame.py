"""Wire-format framing: bit-exact layout and round-trip identity."""

import pytest
from hypothesis import given, strategies as st

from parcelfft.transport import (
    Frame,
    FrameDecodeError,
    HEADER_SIZE,
    decode_frame,
    encode_frame,
)


def test_header_is_29_bytes():
    assert HEADER_SIZE == 29


def test_empty_frame_exact_layout():
    raw = encode_frame(Frame(src=0, dst=1, tag=0, payload=b""))
    expected = bytes.fromhex(
        "50434c31"          # magic "PCL1"
        "01"                # version
        "00000000"          # src, little-endian u32
        "01000000"          # dst
        "0000000000000000"  # tag, little-endian u64
        "0000000000000000"  # length
    )
    assert raw == expected


def test_payload_and_fields_encoded_little_endian():
    raw = encode_frame(Frame(src=0x0102, dst=0xA0B0C0D0, tag=0x1122334455667788, payload=b"hi"))
    assert raw[:4] == b"PCL1"
    assert raw[4] == 1
    assert raw[5:9] == bytes.fromhex("02010000")
    assert raw[9:13] == bytes.fromhex("d0c0b0a0")
    assert raw[13:21] == bytes.fromhex("8877665544332211")
    assert raw[21:29] == (2).to_bytes(8, "little")
    assert raw[29:] == b"hi"


@given(
    src=st.integers(0, 2**32 - 1),
    dst=st.integers(0, 2**32 - 1),
    tag=st.integers(0, 2**64 - 1),
    payload=st.binary(max_size=4096),
)
def test_round_trip_identity(src, dst, tag, payload):
    f = Frame(src=src, dst=dst, tag=tag, payload=payload)
    raw = encode_frame(f)
    assert len(raw) == HEADER_SIZE + len(payload)
    assert decode_frame(raw) == f


def test_corrupted_magic_rejected():
    raw = bytearray(encode_frame(Frame(src=0, dst=0, tag=0, payload=b"xyz")))
    raw[0] ^= 0xFF
    with pytest.raises(FrameDecodeError, match="magic"):
        decode_frame(bytes(raw))


def test_unsupported_version_rejected():
    raw = bytearray(encode_frame(Frame(src=0, dst=0, tag=0, payload=b"")))
    raw[4] = 2
    with pytest.raises(FrameDecodeError, match="version"):
        decode_frame(bytes(raw))


def test_truncated_header_rejected():
    raw = encode_frame(Frame(src=0, dst=0, tag=0, payload=b""))
    with pytest.raises(FrameDecodeError, match="header"):
        decode_frame(raw[:HEADER_SIZE - 1])


def test_truncated_payload_rejected():
    raw = encode_frame(Frame(src=0, dst=0, tag=0, payload=b"hello"))
    with pytest.raises(FrameDecodeError, match="payload"):
        decode_frame(raw[:-2])


def test_out_of_range_fields_rejected():
    with pytest.raises(ValueError):
        encode_frame(Frame(src=2**32, dst=0, tag=0, payload=b""))
    with pytest.raises(ValueError):
        encode_frame(Frame(src=0, dst=0, tag=2**64, payload=b""))
