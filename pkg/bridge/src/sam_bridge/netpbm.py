"""Minimal Netpbm codec for the bridge side of the protocol.

Reads P2/P5 grayscale and P6 RGB with maxval <= 255; writes binary masks
as P5 with the exact header layout the pipeline emits
(``P5\\n{w} {h}\\n255\\n``), so empty-prompt masks are byte-identical
across the process boundary.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

_WS = frozenset(b" \t\r\n\v\f")


class NetpbmError(ValueError):
    pass


def _next_token(data: bytes, pos: int, what: str) -> tuple[bytes, int]:
    while pos < len(data):
        c = data[pos]
        if c in _WS:
            pos += 1
        elif c == 0x23:  # comment to end of line
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
        else:
            break
    if pos >= len(data):
        raise NetpbmError(f"missing {what}")
    start = pos
    while pos < len(data) and data[pos] not in _WS and data[pos] != 0x23:
        pos += 1
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, pos = _next_token(data, pos, what)
    try:
        return int(tok), pos
    except ValueError:
        raise NetpbmError(f"{what} is not an integer: {tok!r}") from None


def read_image(path) -> np.ndarray:
    """Load a PGM/PPM file as an (H, W, 3) uint8 RGB array."""
    data = Path(path).read_bytes()
    magic, pos = _next_token(data, 0, "magic")
    if magic not in (b"P2", b"P5", b"P6"):
        raise NetpbmError(f"unsupported magic {magic!r}")
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    maxval, pos = _int_token(data, pos, "maxval")
    if width < 1 or height < 1:
        raise NetpbmError("dimensions must be positive")
    if not 1 <= maxval <= 255:
        raise NetpbmError(f"maxval {maxval} unsupported")
    channels = 3 if magic == b"P6" else 1
    count = width * height * channels
    if magic == b"P2":
        samples = np.empty(count, dtype=np.uint8)
        for i in range(count):
            value, pos = _int_token(data, pos, f"sample {i}")
            if not 0 <= value <= maxval:
                raise NetpbmError(f"sample {value} outside [0, {maxval}]")
            samples[i] = value
        arr = samples
    else:
        if pos >= len(data) or data[pos] not in _WS:
            raise NetpbmError("expected whitespace before binary payload")
        pos += 1
        payload = data[pos : pos + count]
        if len(payload) < count:
            raise NetpbmError(f"payload needs {count} bytes, found {len(payload)}")
        arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        gray = arr.reshape(height, width)
        return np.stack([gray, gray, gray], axis=-1)
    return arr.reshape(height, width, 3)


def write_mask(mask: np.ndarray, path) -> None:
    """Write a {0,1} (H, W) array as a {0,255} binary PGM."""
    height, width = mask.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    payload = (mask.astype(np.uint8) * np.uint8(255)).tobytes()
    Path(path).write_bytes(header + payload)
