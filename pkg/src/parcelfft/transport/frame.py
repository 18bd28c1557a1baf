"""Bit-exact wire framing for rank-to-rank messages.

Layout, all integers little-endian::

    magic(4) | version(1) | src(4) | dst(4) | tag(8) | length(8) | payload(length)

The magic is the ASCII bytes ``PCL1`` and doubles as a version gate.  There
is no checksum: the stream transport underneath already guarantees
integrity.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .errors import FrameDecodeError

MAGIC = b"PCL1"
VERSION = 1

_HEADER = struct.Struct("<4sBIIQQ")
HEADER_SIZE = _HEADER.size  # 4 + 1 + 4 + 4 + 8 + 8 = 29 bytes

_U32 = 1 << 32
_U64 = 1 << 64


@dataclass(frozen=True)
class Frame:
    src: int
    dst: int
    tag: int
    payload: bytes


def encode_frame(f: Frame) -> bytes:
    """Serialize a frame; output length is always HEADER_SIZE + len(payload)."""
    if not (0 <= f.src < _U32 and 0 <= f.dst < _U32):
        raise ValueError(f"src/dst out of 32-bit range: {f.src}, {f.dst}")
    if not 0 <= f.tag < _U64:
        raise ValueError(f"tag out of 64-bit range: {f.tag}")
    payload = bytes(f.payload)
    return _HEADER.pack(MAGIC, VERSION, f.src, f.dst, f.tag, len(payload)) + payload


def encode_header(src: int, dst: int, tag: int, length: int) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, src, dst, tag, length)


def decode_header(buf: bytes) -> tuple[int, int, int, int]:
    """Parse and validate a 29-byte header, returning (src, dst, tag, length)."""
    if len(buf) < HEADER_SIZE:
        raise FrameDecodeError(f"truncated header: {len(buf)} < {HEADER_SIZE} bytes")
    magic, version, src, dst, tag, length = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise FrameDecodeError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FrameDecodeError(f"unsupported version {version}")
    return src, dst, tag, length


def decode_frame(buf: bytes) -> Frame:
    """Inverse of encode_frame: decode_frame(encode_frame(f)) == f exactly."""
    src, dst, tag, length = decode_header(buf)
    if len(buf) < HEADER_SIZE + length:
        raise FrameDecodeError(
            f"truncated payload: have {len(buf) - HEADER_SIZE}, header says {length}"
        )
    return Frame(src=src, dst=dst, tag=tag, payload=bytes(buf[HEADER_SIZE:HEADER_SIZE + length]))
