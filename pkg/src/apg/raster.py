"""8-bit raster types and bit-exact Netpbm (PGM/PPM) codecs.

Grayscale rasters use PGM (binary P5, ASCII P2); RGB rasters use PPM (P6).
Maxval must be <= 255. Comments are accepted on read and never emitted.
Pixel values are kept exactly as stored on disk; nothing in this module
rescales intensities.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Heatmap",
    "BinaryMask",
    "RgbImage",
    "NetpbmError",
    "MalformedHeaderError",
    "MaxvalUnsupportedError",
    "TruncatedPayloadError",
    "MalformedSampleError",
    "DimensionMismatchError",
    "read_pgm",
    "read_ppm",
    "read_image",
    "read_mask",
    "write_pgm",
    "write_ppm",
    "quantize",
]


class NetpbmError(ValueError):
    """Bad Netpbm input; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class MalformedHeaderError(NetpbmError):
    pass


class MaxvalUnsupportedError(NetpbmError):
    pass


class TruncatedPayloadError(NetpbmError):
    pass


class MalformedSampleError(NetpbmError):
    """A raster sample is not a decimal integer or exceeds maxval."""


class DimensionMismatchError(ValueError):
    """Two rasters that must share dimensions do not."""


def _normalize_values(obj, expected_shape: tuple[int, ...], upper: int) -> None:
    if obj.width < 1 or obj.height < 1:
        raise ValueError("raster needs at least one pixel")
    arr = np.asarray(obj.values)
    if arr.shape != expected_shape:
        raise ValueError(f"values shape {arr.shape} does not match declared {expected_shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"values must be integers, got dtype {arr.dtype}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("values outside [0, 255]")
        arr = arr.astype(np.uint8)
    if upper < 255 and arr.size and arr.max() > upper:
        raise ValueError(f"values outside [0, {upper}]")
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    object.__setattr__(obj, "values", arr)


@dataclass(frozen=True, eq=False)
class Heatmap:
    """8-bit grayscale raster, row-major, values in [0, 255]."""

    width: int
    height: int
    values: np.ndarray  # uint8, shape (height, width)

    def __post_init__(self):
        _normalize_values(self, (self.height, self.width), 255)

    @classmethod
    def from_array(cls, values) -> "Heatmap":
        arr = np.asarray(values)
        return cls(arr.shape[1], arr.shape[0], arr)

    def __eq__(self, other):
        return (
            isinstance(other, Heatmap)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Per-pixel foreground mask, values in {0, 1}."""

    width: int
    height: int
    values: np.ndarray  # uint8, shape (height, width)

    def __post_init__(self):
        _normalize_values(self, (self.height, self.width), 1)

    @classmethod
    def from_array(cls, values) -> "BinaryMask":
        arr = np.asarray(values)
        return cls(arr.shape[1], arr.shape[0], arr)

    @classmethod
    def zeros(cls, width: int, height: int) -> "BinaryMask":
        return cls(width, height, np.zeros((height, width), dtype=np.uint8))

    @property
    def foreground_count(self) -> int:
        return int(np.count_nonzero(self.values))

    def __eq__(self, other):
        return (
            isinstance(other, BinaryMask)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit RGB raster, row-major, interleaved channels."""

    width: int
    height: int
    values: np.ndarray  # uint8, shape (height, width, 3)

    def __post_init__(self):
        _normalize_values(self, (self.height, self.width, 3), 255)

    @classmethod
    def from_array(cls, values) -> "RgbImage":
        arr = np.asarray(values)
        return cls(arr.shape[1], arr.shape[0], arr)

    def __eq__(self, other):
        return (
            isinstance(other, RgbImage)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.values, other.values)
        )


# ---------------------------------------------------------------------------
# Netpbm parsing

_WS = frozenset(b" \t\r\n\v\f")


def _skip_space(data: bytes, pos: int) -> int:
    # Whitespace and '#'-to-end-of-line comments separate header tokens.
    while pos < len(data):
        c = data[pos]
        if c in _WS:
            pos += 1
        elif c == 0x23:  # '#'
            while pos < len(data) and data[pos] not in (0x0A, 0x0D):
                pos += 1
        else:
            break
    return pos


def _next_token(data: bytes, pos: int, what: str, exc=MalformedHeaderError) -> tuple[bytes, int, int]:
    pos = _skip_space(data, pos)
    if pos >= len(data):
        raise exc(f"missing {what}", pos)
    start = pos
    while pos < len(data) and data[pos] not in _WS and data[pos] != 0x23:
        pos += 1
    return data[start:pos], pos, start


def _int_token(data: bytes, pos: int, what: str, exc=MalformedHeaderError) -> tuple[int, int, int]:
    tok, pos, off = _next_token(data, pos, what, exc)
    try:
        value = int(tok)
    except ValueError:
        raise exc(f"{what} is not a decimal integer: {tok!r}", off) from None
    return value, pos, off


def _read_header(data: bytes, magics: tuple[bytes, ...], kind: str) -> tuple[bytes, int, int, int, int]:
    magic, pos, off = _next_token(data, 0, "magic number")
    if magic not in magics:
        raise MalformedHeaderError(f"not a {kind} file: magic {magic!r}", off)
    width, pos, off = _int_token(data, pos, "width")
    if width < 1:
        raise MalformedHeaderError(f"width must be >= 1, got {width}", off)
    height, pos, off = _int_token(data, pos, "height")
    if height < 1:
        raise MalformedHeaderError(f"height must be >= 1, got {height}", off)
    maxval, pos, off = _int_token(data, pos, "maxval")
    if maxval < 1:
        raise MalformedHeaderError(f"maxval must be >= 1, got {maxval}", off)
    if maxval > 255:
        raise MaxvalUnsupportedError(f"maxval {maxval} > 255 unsupported", off)
    return magic, width, height, maxval, pos


def _read_binary_payload(data: bytes, pos: int, count: int, maxval: int) -> tuple[np.ndarray, int]:
    # Exactly one whitespace byte separates maxval from the binary payload.
    if pos >= len(data) or data[pos] not in _WS:
        raise MalformedHeaderError("expected single whitespace before binary payload", pos)
    pos += 1
    payload = data[pos : pos + count]
    if len(payload) < count:
        raise TruncatedPayloadError(
            f"payload needs {count} bytes, found {len(payload)}", len(data)
        )
    arr = np.frombuffer(payload, dtype=np.uint8)
    if maxval < 255 and arr.size and arr.max() > maxval:
        bad = int(np.argmax(arr > maxval))
        raise MalformedSampleError(f"sample {int(arr[bad])} exceeds maxval {maxval}", pos + bad)
    return arr, pos + count


def _read_ascii_payload(data: bytes, pos: int, count: int, maxval: int) -> np.ndarray:
    samples = np.empty(count, dtype=np.uint8)
    for i in range(count):
        tok, pos, off = _next_token(data, pos, f"sample {i}", exc=TruncatedPayloadError)
        try:
            value = int(tok)
        except ValueError:
            raise MalformedSampleError(f"sample is not a decimal integer: {tok!r}", off) from None
        if value < 0 or value > maxval:
            raise MalformedSampleError(f"sample {value} outside [0, {maxval}]", off)
        samples[i] = value
    return samples


def read_pgm(path) -> Heatmap:
    """Read a P2/P5 PGM file exactly, with no intensity rescaling."""
    data = Path(path).read_bytes()
    magic, width, height, maxval, pos = _read_header(data, (b"P2", b"P5"), "PGM")
    if magic == b"P5":
        arr, _ = _read_binary_payload(data, pos, width * height, maxval)
    else:
        arr = _read_ascii_payload(data, pos, width * height, maxval)
    return Heatmap(width, height, arr.reshape(height, width))


def read_ppm(path) -> RgbImage:
    """Read a binary P6 PPM file."""
    data = Path(path).read_bytes()
    _, width, height, maxval, pos = _read_header(data, (b"P6",), "PPM")
    arr, _ = _read_binary_payload(data, pos, width * height * 3, maxval)
    return RgbImage(width, height, arr.reshape(height, width, 3))


def read_image(path):
    """Read a PGM or PPM file, returning Heatmap or RgbImage by magic number."""
    data = Path(path).read_bytes()
    magic, _, off = _next_token(data, 0, "magic number")
    if magic in (b"P2", b"P5"):
        return read_pgm(path)
    if magic == b"P6":
        return read_ppm(path)
    raise MalformedHeaderError(f"unsupported magic {magic!r}", off)


def read_mask(path) -> BinaryMask:
    """Read a mask stored as PGM: values >= 128 load as foreground."""
    gray = read_pgm(path)
    return BinaryMask(gray.width, gray.height, (gray.values >= 128).astype(np.uint8))


def write_pgm(raster: Heatmap | BinaryMask, path) -> None:
    """Write a grayscale raster as binary P5. BinaryMask is encoded {0,255}."""
    if isinstance(raster, BinaryMask):
        payload = (raster.values * np.uint8(255)).tobytes()
    elif isinstance(raster, Heatmap):
        payload = raster.values.tobytes()
    else:
        raise TypeError(f"cannot write {type(raster).__name__} as PGM")
    header = f"P5\n{raster.width} {raster.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + payload)


def write_ppm(image: RgbImage, path) -> None:
    """Write an RGB raster as binary P6."""
    if not isinstance(image, RgbImage):
        raise TypeError(f"cannot write {type(image).__name__} as PPM")
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.values.tobytes())


def quantize(value):
    """Map float activation in [0, 1] to an 8-bit level.

    Computes floor(v * 255 + 0.5) after clamping v into [0, 1]; out-of-range
    inputs (negatives, > 1) clamp rather than raise. Accepts scalars or
    arrays; ties round up.
    """
    arr = np.asarray(value, dtype=np.float64)
    q = np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    if np.isscalar(value) or getattr(value, "ndim", 0) == 0:
        return int(q)
    return q
