"""Minimal deterministic 8-bit grayscale PNG writer.

Library encoders are free to change filter heuristics or ancillary chunks
between versions; pipeline artifacts must instead be byte-stable across runs,
platforms and worker counts.  This writer emits exactly three chunks (IHDR,
IDAT, IEND), scanline filter 0, zlib level 6, and nothing else.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import OutputNotWritable

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


def _chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def encode_gray_png(pixels: np.ndarray) -> bytes:
    """Serialize a 2-D uint8 array as grayscale PNG bytes."""
    arr = np.asarray(pixels)
    if arr.ndim != 2 or arr.dtype != np.uint8:
        raise ValueError(f"expected 2-D uint8 array, got {arr.shape} {arr.dtype}")
    height, width = arr.shape
    ihdr = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + arr[row].tobytes() for row in range(height))
    idat = zlib.compress(raw, _ZLIB_LEVEL)
    return _SIGNATURE + _chunk(b"IHDR", ihdr) + _chunk(b"IDAT", idat) + _chunk(b"IEND", b"")


def write_gray_png(pixels: np.ndarray, path: Path | str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_gray_png(pixels))
    except OSError as exc:
        raise OutputNotWritable(f"cannot write {path}: {exc}") from exc


def read_gray_png(path: Path | str) -> np.ndarray:
    """Read a grayscale PNG back into a 2-D uint8 array (via Pillow)."""
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.uint8)
