"""Deterministic synthetic scenes: blobs, ground truth, and coarse heatmaps.

Scenes imitate the weak points of activation heatmaps on purpose: the
heatmap blurs and over-extends the true objects and peaks at 255 in their
interiors, so it localizes them with hot centers and soft, inflated edges
instead of crisp boundaries.

All randomness flows through a SplitMix64 generator so identical specs
produce bit-identical corpora on any platform. Sample i of a corpus uses
``seed + i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .manifest import ImageSample, Manifest, load_manifest, write_manifest
from .raster import BinaryMask, Heatmap, quantize, write_pgm
from .segmenter import DEFAULT_DELTA

__all__ = ["SplitMix64", "SceneSpec", "SceneSample", "generate", "emit_corpus"]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator.

    state += 0x9E3779B97F4A7C15;
    z = state; z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9;
    z = (z ^ z >> 27) * 0x94D049BB133111EB; return z ^ z >> 31.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]; modulo reduction (bias < 2**-50
        for the ranges used here)."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)


@dataclass(frozen=True)
class SceneSpec:
    seed: int
    width: int = 256
    height: int = 256
    object_count: tuple[int, int] = (0, 3)
    object_size: tuple[int, int] = (100, 400)  # pixels per blob
    object_intensity: tuple[int, int] = (190, 220)
    background_intensity: tuple[int, int] = (20, 70)
    blur_radius: int = 2
    peak_decay: float = 0.7  # decay exponent; lower = fatter halo around objects

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ValueError("scene must be at least 8x8")
        lo, hi = self.object_count
        if lo < 0 or hi < lo:
            raise ValueError(f"bad object count range {self.object_count}")
        if self.object_size[0] < 1 or self.object_size[1] < self.object_size[0]:
            raise ValueError(f"bad object size range {self.object_size}")
        for band in (self.object_intensity, self.background_intensity):
            if not (0 <= band[0] <= band[1] <= 255):
                raise ValueError(f"bad intensity band {band}")
        # The default mock segmenter tolerance must not bridge the bands.
        gap = self.object_intensity[0] - self.background_intensity[1]
        if gap < 2 * DEFAULT_DELTA:
            raise ValueError(
                f"intensity bands must be separated by >= {2 * DEFAULT_DELTA}, gap is {gap}"
            )
        if self.blur_radius < 0 or self.peak_decay <= 0:
            raise ValueError("blur_radius must be >= 0 and peak_decay > 0")


@dataclass(frozen=True)
class SceneSample:
    image: Heatmap
    gt_mask: BinaryMask
    heatmap: Heatmap
    label: int


def generate(spec: SceneSpec) -> SceneSample:
    """Render one scene, fully determined by the given SceneSpec."""
    rng = SplitMix64(spec.seed)
    w, h = spec.width, spec.height
    occupied: set[tuple[int, int]] = set()
    count = rng.randint(*spec.object_count)
    blobs: list[set[tuple[int, int]]] = []
    for _ in range(count):
        blob = _grow_blob(rng, spec, occupied)
        if blob:
            blobs.append(blob)
            occupied |= blob

    gt = np.zeros((h, w), dtype=np.uint8)
    image = np.empty((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            image[y, x] = rng.randint(*spec.background_intensity)
    for blob in blobs:
        level = rng.randint(*spec.object_intensity)
        for x, y in blob:
            gt[y, x] = 1
            image[y, x] = level

    label = 1 if blobs else 0
    heat = _render_heatmap(gt, spec) if label else np.zeros((h, w), dtype=np.uint8)
    return SceneSample(
        image=Heatmap(w, h, image),
        gt_mask=BinaryMask(w, h, gt),
        heatmap=Heatmap(w, h, heat),
        label=label,
    )


def _grow_blob(rng: SplitMix64, spec: SceneSpec, occupied: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Eden-style growth: repeatedly claim a random frontier pixel.

    A pixel is admissible when it keeps a moat around previously placed
    blobs wide enough that their blurred activations cannot bridge (so
    components never merge, in the mask or in the heatmap) and stays off
    the border. Enclosed pockets are filled afterwards to keep blobs
    simply connected.
    """
    w, h = spec.width, spec.height
    margin = 2
    moat = 2 * spec.blur_radius + 1

    def admissible(x: int, y: int) -> bool:
        if not (margin <= x < w - margin and margin <= y < h - margin):
            return False
        for nx in range(x - moat, x + moat + 1):
            for ny in range(y - moat, y + moat + 1):
                if (nx, ny) in occupied:
                    return False
        return True

    target = rng.randint(*spec.object_size)
    for _ in range(50):  # seed retries; dense scenes may reject a few spots
        sx, sy = rng.randint(margin, w - margin - 1), rng.randint(margin, h - margin - 1)
        if admissible(sx, sy):
            break
    else:
        return set()

    blob = {(sx, sy)}
    frontier = []
    in_frontier = set()

    def push_neighbors(x: int, y: int) -> None:
        for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
            if (nx, ny) not in blob and (nx, ny) not in in_frontier and admissible(nx, ny):
                frontier.append((nx, ny))
                in_frontier.add((nx, ny))

    push_neighbors(sx, sy)
    while len(blob) < target and frontier:
        # Near-FIFO pick: compact, roundish growth with a wobbly edge.
        # Uniform picks would grow straggly tips that thin out the blurred
        # heatmap at the blob extremes.
        i = rng.randint(0, min(len(frontier), 4) - 1)
        p = frontier.pop(i)
        in_frontier.discard(p)
        if not admissible(p[0], p[1]):
            continue
        blob.add(p)
        push_neighbors(*p)
    return _fill_holes(blob, w, h)


def _fill_holes(blob: set[tuple[int, int]], w: int, h: int) -> set[tuple[int, int]]:
    """Add background pockets fully enclosed by the blob."""
    if not blob:
        return blob
    xs = [p[0] for p in blob]
    ys = [p[1] for p in blob]
    x0, x1 = max(min(xs) - 1, 0), min(max(xs) + 1, w - 1)
    y0, y1 = max(min(ys) - 1, 0), min(max(ys) + 1, h - 1)
    outside: set[tuple[int, int]] = set()
    queue = deque()
    for x in range(x0, x1 + 1):
        for y in (y0, y1):
            p = (x, y)
            if p not in blob and p not in outside:
                outside.add(p)
                queue.append(p)
    for y in range(y0, y1 + 1):
        for x in (x0, x1):
            p = (x, y)
            if p not in blob and p not in outside:
                outside.add(p)
                queue.append(p)
    while queue:
        x, y = queue.popleft()
        for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
            p = (nx, ny)
            if x0 <= nx <= x1 and y0 <= ny <= y1 and p not in blob and p not in outside:
                outside.add(p)
                queue.append(p)
    filled = set(blob)
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            p = (x, y)
            if p not in blob and p not in outside:
                filled.add(p)
    return filled


def _render_heatmap(gt: np.ndarray, spec: SceneSpec) -> np.ndarray:
    """Blurred, decay-lifted, peak-normalized activation over the mask.

    The support is dilated one pixel before blurring, so every true object
    pixel sits strictly inside the hot region; blur and the decay exponent
    then soften and inflate the outline, the way coarse activation maps
    overshoot object extents without tracing their boundaries.
    """
    act = _box_blur(_dilate(gt.astype(np.float64)), spec.blur_radius)
    peak = act.max()
    if peak > 0:
        act = act / peak
    act = act**spec.peak_decay
    return quantize(act)


def _dilate(act: np.ndarray) -> np.ndarray:
    out = act.copy()
    h, w = act.shape
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            ys = slice(max(dy, 0), h + min(dy, 0))
            xs = slice(max(dx, 0), w + min(dx, 0))
            yd = slice(max(-dy, 0), h + min(-dy, 0))
            xd = slice(max(-dx, 0), w + min(-dx, 0))
            np.maximum(out[yd, xd], act[ys, xs], out=out[yd, xd])
    return out


def _box_blur(act: np.ndarray, radius: int) -> np.ndarray:
    """Separable box blur; window is clipped at the raster edges."""
    if radius <= 0:
        return act
    for axis in (0, 1):
        n = act.shape[axis]
        cum = np.cumsum(act, axis=axis, dtype=np.float64)
        cum = np.concatenate([np.zeros_like(np.take(cum, [0], axis=axis)), cum], axis=axis)
        idx_hi = np.minimum(np.arange(n) + radius + 1, n)
        idx_lo = np.maximum(np.arange(n) - radius, 0)
        sums = np.take(cum, idx_hi, axis=axis) - np.take(cum, idx_lo, axis=axis)
        counts = (idx_hi - idx_lo).astype(np.float64)
        if axis == 0:
            act = sums / counts[:, np.newaxis]
        else:
            act = sums / counts[np.newaxis, :]
    return act


def emit_corpus(template: SceneSpec, count: int, out_dir) -> Manifest:
    """Write ``count`` scenes plus a manifest; returns the loaded manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    samples = []
    for i in range(count):
        scene = generate(replace(template, seed=template.seed + i))
        sid = f"s{i:04d}"
        image_path = out / f"{sid}_image.pgm"
        heatmap_path = out / f"{sid}_heatmap.pgm"
        gt_path = out / f"{sid}_gt.pgm"
        write_pgm(scene.image, image_path)
        write_pgm(scene.heatmap, heatmap_path)
        write_pgm(scene.gt_mask, gt_path)
        samples.append(
            ImageSample(
                id=sid,
                image_path=image_path,
                heatmap_path=heatmap_path,
                image_label=scene.label,
                gt_mask_path=gt_path,
            )
        )
    manifest_path = out / "manifest.csv"
    write_manifest(Manifest(tuple(samples)), manifest_path)
    return load_manifest(manifest_path)
