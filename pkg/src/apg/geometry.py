"""Per-contour geometry: tight bounding boxes, raw moments, centroids.

Moments are summed over the filled region (not just the boundary ring) in
exact integer arithmetic; m00 is the region area. The centroid divides the
first moments by the area with correctly-rounded float division, so it is
exact to the last ulp of the true rational value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contour import Contour

__all__ = [
    "BoundingBox",
    "MomentSet",
    "PointPrompt",
    "EmptyContourError",
    "bounding_rect",
    "moments",
    "centroid",
]


class EmptyContourError(ValueError):
    pass


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box: top-left corner plus width/height, all in pixels."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"box must span at least one pixel, got w={self.w} h={self.h}")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError(f"box origin must be non-negative, got ({self.x0}, {self.y0})")

    def contains(self, cx: float, cy: float) -> bool:
        """True when the point lies on a pixel covered by the box."""
        return self.x0 <= cx <= self.x0 + self.w - 1 and self.y0 <= cy <= self.y0 + self.h - 1


@dataclass(frozen=True)
class MomentSet:
    """Raw moments of a pixel region: area and first-order sums."""

    m00: int
    m10: int
    m01: int

    def __post_init__(self):
        if self.m00 < 0 or self.m10 < 0 or self.m01 < 0:
            raise ValueError("raw moments of a pixel region are non-negative")


@dataclass(frozen=True)
class PointPrompt:
    """A positive (foreground) point, sub-pixel coordinates."""

    cx: float
    cy: float
    label: int = 1

    def __post_init__(self):
        if self.cx < 0 or self.cy < 0:
            raise ValueError(f"point coordinates must be non-negative, got ({self.cx}, {self.cy})")
        if self.label < 1:
            raise ValueError("point prompts are always positive-labeled")


def bounding_rect(contour: Contour) -> BoundingBox:
    """Tight box over the contour region, inclusive-extent convention."""
    if not contour.region:
        raise EmptyContourError(f"contour {contour.id} has an empty region")
    xs = [p.x for p in contour.region]
    ys = [p.y for p in contour.region]
    x0, y0 = min(xs), min(ys)
    return BoundingBox(x0, y0, max(xs) - x0 + 1, max(ys) - y0 + 1)


def moments(contour: Contour) -> MomentSet:
    """Exact integer raw moments m00, m10, m01 over the filled region."""
    m00 = len(contour.region)
    m10 = 0
    m01 = 0
    for p in contour.region:
        m10 += p.x
        m01 += p.y
    return MomentSet(m00=m00, m10=m10, m01=m01)


def centroid(m: MomentSet) -> PointPrompt | None:
    """Centroid (m10/m00, m01/m00) as a positive point; None when m00 == 0.

    The None result is the distinguished "undefined" value for empty
    regions, not an error.
    """
    if m.m00 == 0:
        return None
    return PointPrompt(cx=m.m10 / m.m00, cy=m.m01 / m.m00)
