"""Hard-threshold a heatmap into a foreground/background mask."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import BinaryMask, Heatmap

__all__ = ["BinarizeConfig", "binarize", "DEFAULT_THRESHOLD"]

DEFAULT_THRESHOLD = 120


@dataclass(frozen=True)
class BinarizeConfig:
    threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must be in [0, 255], got {self.threshold}")


def binarize(heatmap: Heatmap, cfg: BinarizeConfig = BinarizeConfig()) -> BinaryMask:
    """Mark a pixel foreground iff its value strictly exceeds the threshold."""
    fg = (heatmap.values > cfg.threshold).astype(np.uint8)
    return BinaryMask(heatmap.width, heatmap.height, fg)
