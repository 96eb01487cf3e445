"""Connected foreground components and their outer boundary rings.

Components use 8-connectivity. Labeling is a classic two-pass scan with
union-find over the four already-visited neighbors; the outer boundary is
traced with Moore-neighborhood border following, walking clockwise in image
coordinates (x right, y down) from the component's top-most, then left-most
pixel. Only outer rings are produced; holes stay inside the region set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .raster import BinaryMask

__all__ = ["PixelCoord", "Contour", "ContourSet", "find_contours", "dump_contours"]


class PixelCoord(NamedTuple):
    x: int  # column, 0-based, rightward
    y: int  # row, 0-based, downward


@dataclass(frozen=True)
class Contour:
    """One connected foreground component: filled region + outer ring."""

    id: int
    boundary: tuple[PixelCoord, ...]
    region: frozenset[PixelCoord]

    def __post_init__(self):
        if not self.boundary:
            raise ValueError("contour boundary must be non-empty")
        if not frozenset(self.boundary) <= self.region:
            raise ValueError("boundary pixels must belong to the region")

    @property
    def area(self) -> int:
        return len(self.region)


@dataclass(frozen=True)
class ContourSet:
    contours: tuple[Contour, ...] = field(default_factory=tuple)
    discarded_pixels: int = 0  # foreground dropped by the min-area filter

    def __post_init__(self):
        object.__setattr__(self, "contours", tuple(self.contours))

    @property
    def k(self) -> int:
        return len(self.contours)

    def __iter__(self):
        return iter(self.contours)

    def __len__(self) -> int:
        return len(self.contours)


# Clockwise Moore neighborhood starting at west, for y pointing down.
_CLOCKWISE = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_CLOCKWISE_INDEX = {off: i for i, off in enumerate(_CLOCKWISE)}


def find_contours(mask: BinaryMask, min_area: int = 0) -> ContourSet:
    """Extract one contour per 8-connected component with area >= min_area.

    Contours are ordered by their starting pixel (top-most, then left-most),
    which is also where each boundary ring begins. Pixels belonging to
    components smaller than min_area are counted in ``discarded_pixels``.
    """
    if min_area < 0:
        raise ValueError("min_area must be >= 0")
    grid = mask.values.tolist()
    regions = _label_components(grid, mask.width, mask.height)
    contours = []
    discarded = 0
    k = 0
    for pixels in regions:
        if len(pixels) < min_area:
            discarded += len(pixels)
            continue
        k += 1
        start = pixels[0]  # first pixel in scan order = top-most, left-most
        boundary = _trace_boundary(grid, mask.width, mask.height, start)
        contours.append(Contour(id=k, boundary=boundary, region=frozenset(pixels)))
    return ContourSet(tuple(contours), discarded)


def _label_components(grid: list[list[int]], width: int, height: int) -> list[list[PixelCoord]]:
    """Two-pass 8-connected labeling; returns regions in scan order of their
    first pixel, each region listed in scan order."""
    labels = [[0] * width for _ in range(height)]
    parent = [0]  # union-find over provisional labels, parent[i] <= i

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    next_label = 1
    for y in range(height):
        row = grid[y]
        lab_row = labels[y]
        lab_up = labels[y - 1] if y else None
        for x in range(width):
            if not row[x]:
                continue
            best = 0
            if x and lab_row[x - 1]:
                best = lab_row[x - 1]
            if lab_up is not None:
                for nx in (x - 1, x, x + 1):
                    if 0 <= nx < width and lab_up[nx]:
                        lab = lab_up[nx]
                        if not best or lab < best:
                            if best:
                                _union(parent, find, best, lab)
                            best = lab
                        elif lab != best:
                            _union(parent, find, best, lab)
            if best:
                lab_row[x] = best
            else:
                parent.append(next_label)
                lab_row[x] = next_label
                next_label += 1
    regions: dict[int, list[PixelCoord]] = {}
    for y in range(height):
        lab_row = labels[y]
        for x in range(width):
            if lab_row[x]:
                regions.setdefault(find(lab_row[x]), []).append(PixelCoord(x, y))
    return list(regions.values())


def _union(parent: list[int], find, a: int, b: int) -> None:
    ra, rb = find(a), find(b)
    if ra != rb:
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra


def _trace_boundary(
    grid: list[list[int]], width: int, height: int, start: PixelCoord
) -> tuple[PixelCoord, ...]:
    """Moore-neighborhood border following, clockwise from ``start``.

    The walk scans the 8 neighbors of the current pixel clockwise, beginning
    just after the backtrack (last background) position, and stops when the
    (pixel, backtrack) state repeats — the full-state form of Jacob's
    stopping criterion, which also terminates on pathological rings.
    """

    def fg(x: int, y: int) -> bool:
        return 0 <= x < width and 0 <= y < height and bool(grid[y][x])

    # Start pixel is top-most/left-most, so its west neighbor is background.
    state0 = (start, PixelCoord(start.x - 1, start.y))
    cur, back = state0
    boundary = [start]
    seen = {state0}
    while True:
        base = _CLOCKWISE_INDEX[(back.x - cur.x, back.y - cur.y)]
        nxt = None
        for step in range(1, 9):
            dx, dy = _CLOCKWISE[(base + step) % 8]
            if fg(cur.x + dx, cur.y + dy):
                nxt = PixelCoord(cur.x + dx, cur.y + dy)
                bx, by = _CLOCKWISE[(base + step - 1) % 8]
                back = PixelCoord(cur.x + bx, cur.y + by)
                break
        if nxt is None:
            break  # isolated pixel: degenerate one-pixel ring
        cur = nxt
        state = (cur, back)
        if state in seen:
            break
        seen.add(state)
        boundary.append(cur)
    # Thin shapes close the walk back onto the start pixel; drop the
    # duplicate so the ring stays cyclically 8-adjacent without self-pairs.
    if len(boundary) > 1 and boundary[-1] == boundary[0]:
        boundary.pop()
    return tuple(boundary)


def dump_contours(contours: ContourSet) -> str:
    """Debug CSV, one line per contour: ``k,area,x0,y0,w,h``."""
    lines = []
    for c in contours:
        xs = [p.x for p in c.region]
        ys = [p.y for p in c.region]
        x0, y0 = min(xs), min(ys)
        lines.append(f"{c.id},{c.area},{x0},{y0},{max(xs) - x0 + 1},{max(ys) - y0 + 1}")
    return "\n".join(lines) + ("\n" if lines else "")
