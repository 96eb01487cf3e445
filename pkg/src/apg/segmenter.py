"""Promptable-segmenter contract, a deterministic mock, and the external
process bridge.

Every backend maps (image, prompt set) to a binary mask of the image's
dimensions, returns all-background for an empty prompt set, and is
deterministic for a fixed request. The mock rewards correct prompts with a
seeded intensity flood fill; the external backend shells out to a bridge
process speaking the path-based protocol documented in the README.
"""

from __future__ import annotations

import abc
import os
import subprocess
import tempfile
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .prompts import PromptPair, PromptSet
from .raster import BinaryMask, DimensionMismatchError, Heatmap, RgbImage, read_mask

__all__ = [
    "SegmenterRequest",
    "Segmenter",
    "MockSegmenterConfig",
    "MockSegmenter",
    "ExternalSegmenter",
    "BackendError",
    "union_masks",
    "DEFAULT_DELTA",
]

DEFAULT_DELTA = 10


class BackendError(RuntimeError):
    """A segmenter backend failed for one request; the batch may continue."""


@dataclass(frozen=True)
class SegmenterRequest:
    image: Heatmap | RgbImage
    prompts: PromptSet
    # Path-based backends read these instead of the in-memory pixels.
    image_path: Path | None = None
    prompts_path: Path | None = None

    def __post_init__(self):
        if (self.image.width, self.image.height) != (self.prompts.width, self.prompts.height):
            raise DimensionMismatchError(
                f"prompt set dimensions {self.prompts.width}x{self.prompts.height} "
                f"do not match image {self.image.width}x{self.image.height}"
            )


class Segmenter(abc.ABC):
    """Backend contract: deterministic, all-background on empty prompts."""

    name = "abstract"
    #: Backends that cannot serve concurrent requests set this; the driver
    #: then serializes the segment stage.
    exclusive = False

    @abc.abstractmethod
    def segment(self, request: SegmenterRequest) -> BinaryMask:
        raise NotImplementedError


@dataclass(frozen=True)
class MockSegmenterConfig:
    delta: int = DEFAULT_DELTA  # intensity tolerance around the seed value

    def __post_init__(self):
        if not 0 <= self.delta <= 255:
            raise ValueError(f"delta must be in [0, 255], got {self.delta}")


class MockSegmenter(Segmenter):
    """Seeded intensity flood fill standing in for a learned mask decoder.

    Per prompt pair: seed at the point (or the box center when only a box is
    given), grow an 8-connected region of pixels whose intensity differs
    from the seed's by at most delta, clip the grown region to the box when
    one is present, and union the contributions of all pairs. For RGB
    images the intensity distance is the largest per-channel difference.
    """

    name = "mock"

    def __init__(self, config: MockSegmenterConfig | None = None):
        self.config = config or MockSegmenterConfig()

    def segment(self, request: SegmenterRequest) -> BinaryMask:
        image = request.image
        out = np.zeros((image.height, image.width), dtype=np.uint8)
        if request.prompts.pairs:
            channels = image.values.astype(np.int16)
            if isinstance(image, Heatmap):
                channels = channels[:, :, np.newaxis]
            grid = channels.tolist()
            for pair in request.prompts.pairs:
                grown = _flood_fill(
                    grid, image.width, image.height, _seed_pixel(pair), self.config.delta
                )
                if pair.box is not None:
                    b = pair.box
                    grown = [
                        (x, y)
                        for x, y in grown
                        if b.x0 <= x < b.x0 + b.w and b.y0 <= y < b.y0 + b.h
                    ]
                for x, y in grown:
                    out[y, x] = 1
        return BinaryMask(image.width, image.height, out)


def _seed_pixel(pair: PromptPair) -> tuple[int, int]:
    """Nearest pixel to the point (ties toward +inf), else the box center."""
    if pair.point is not None:
        cx, cy = pair.point.cx, pair.point.cy
    else:
        b = pair.box
        cx, cy = b.x0 + (b.w - 1) / 2, b.y0 + (b.h - 1) / 2
    return int(np.floor(cx + 0.5)), int(np.floor(cy + 0.5))


def _flood_fill(
    grid: list, width: int, height: int, seed: tuple[int, int], delta: int
) -> list[tuple[int, int]]:
    sx, sy = seed
    ref = grid[sy][sx]
    visited = [[False] * width for _ in range(height)]
    visited[sy][sx] = True
    queue = deque([seed])
    grown = [seed]
    while queue:
        x, y = queue.popleft()
        for nx in (x - 1, x, x + 1):
            for ny in (y - 1, y, y + 1):
                if 0 <= nx < width and 0 <= ny < height and not visited[ny][nx]:
                    visited[ny][nx] = True
                    pixel = grid[ny][nx]
                    if all(abs(pixel[c] - ref[c]) <= delta for c in range(len(ref))):
                        queue.append((nx, ny))
                        grown.append((nx, ny))
    return grown


class ExternalSegmenter(Segmenter):
    """Shells out per request: ``cmd --image I --prompts P --out M``.

    A nonzero exit status signals backend failure; the first stderr line
    carries a machine-readable reason. Requests must carry image and prompt
    file paths.
    """

    name = "external"
    exclusive = True  # one bridge process at a time

    def __init__(self, command: list[str] | tuple[str, ...]):
        if not command:
            raise ValueError("external segmenter needs a command")
        self.command = tuple(command)

    def segment(self, request: SegmenterRequest) -> BinaryMask:
        if request.image_path is None or request.prompts_path is None:
            raise BackendError("external backend requires image and prompt file paths")
        fd, tmp = tempfile.mkstemp(suffix=".pgm")
        os.close(fd)
        try:
            argv = [
                *self.command,
                "--image",
                str(request.image_path),
                "--prompts",
                str(request.prompts_path),
                "--out",
                tmp,
            ]
            try:
                proc = subprocess.run(argv, capture_output=True, text=True)
            except OSError as exc:
                raise BackendError(f"cannot run bridge command {self.command[0]!r}: {exc}") from None
            if proc.returncode != 0:
                reason = proc.stderr.strip().splitlines()
                raise BackendError(
                    f"bridge exited {proc.returncode}: {reason[0] if reason else 'no reason given'}"
                )
            mask = read_mask(tmp)
            if (mask.width, mask.height) != (request.image.width, request.image.height):
                raise BackendError(
                    f"bridge mask is {mask.width}x{mask.height}, "
                    f"expected {request.image.width}x{request.image.height}"
                )
            return mask
        finally:
            os.unlink(tmp)


def union_masks(masks: list[BinaryMask]) -> BinaryMask:
    """Pixel-wise OR of same-sized masks."""
    if not masks:
        raise ValueError("union of zero masks is undefined (no dimensions)")
    first = masks[0]
    out = first.values.copy()
    for m in masks[1:]:
        if (m.width, m.height) != (first.width, first.height):
            raise DimensionMismatchError(
                f"mask {m.width}x{m.height} does not match {first.width}x{first.height}"
            )
        out |= m.values
    return BinaryMask(first.width, first.height, out)
