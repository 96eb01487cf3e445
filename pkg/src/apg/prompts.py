"""Per-image prompt sets and their JSON interchange format.

A prompt set pairs each contour's bounding box with its centroid point.
Ablation modes drop one side of the pair; grid mode ignores contours and
lays an N x N lattice of positive points at uniform cell centers.

Interchange schema (``apg/1``, JSON, UTF-8)::

    {"schema": "apg/1", "image_id": "...", "width": W, "height": H,
     "mode": "point+box", "convention": "xywh",
     "pairs": [{"k": 1, "box": [x0, y0, w, h] | null,
                "point": [cx, cy] | null, "label": 1}]}

Boxes serialize as (x0, y0, w, h); the ``convention`` field makes the
corner-form conversion on the consumer side unambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .contour import ContourSet
from .geometry import BoundingBox, PointPrompt, bounding_rect, centroid, moments

__all__ = [
    "MODES",
    "SCHEMA",
    "GridConfig",
    "PromptPair",
    "PromptSet",
    "PromptSchemaError",
    "build_prompts",
    "build_grid_prompts",
    "write_prompts",
    "read_prompts",
]

SCHEMA = "apg/1"
MODES = ("point+box", "box-only", "point-only", "grid")
_CONTOUR_MODES = ("point+box", "box-only", "point-only")


class PromptSchemaError(ValueError):
    """Prompt file violates the interchange schema; `path` names the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class GridConfig:
    n: int = 8  # points per edge

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"grid needs at least one point per edge, got {self.n}")


@dataclass(frozen=True)
class PromptPair:
    box: BoundingBox | None
    point: PointPrompt | None
    source_contour: int


@dataclass(frozen=True)
class PromptSet:
    image_id: str
    width: int
    height: int
    mode: str
    pairs: tuple[PromptPair, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        if self.mode not in MODES:
            raise ValueError(f"unknown prompt mode {self.mode!r}")
        if self.width < 1 or self.height < 1:
            raise ValueError("prompt set needs positive image dimensions")
        for i, pair in enumerate(self.pairs):
            where = f"pairs[{i}]"
            if self.mode == "box-only" and pair.point is not None:
                raise ValueError(f"{where}: box-only mode forbids points")
            if self.mode in ("point-only", "grid"):
                if pair.box is not None:
                    raise ValueError(f"{where}: {self.mode} mode forbids boxes")
                if pair.point is None:
                    raise ValueError(f"{where}: {self.mode} mode requires a point")
            if self.mode in ("point+box", "box-only") and pair.box is None:
                raise ValueError(f"{where}: {self.mode} mode requires a box")
            if pair.box is not None:
                if pair.box.x0 + pair.box.w > self.width or pair.box.y0 + pair.box.h > self.height:
                    raise ValueError(f"{where}: box exceeds image bounds")
            if pair.point is not None:
                if pair.point.cx > self.width - 1 or pair.point.cy > self.height - 1:
                    raise ValueError(f"{where}: point outside image bounds")
            if pair.box is not None and pair.point is not None:
                if not pair.box.contains(pair.point.cx, pair.point.cy):
                    raise ValueError(f"{where}: point lies outside its box")


def build_prompts(
    contours: ContourSet, mode: str, width: int, height: int, image_id: str = ""
) -> PromptSet:
    """One prompt pair per contour, populated according to the mode."""
    if mode not in _CONTOUR_MODES:
        raise ValueError(f"mode must be one of {_CONTOUR_MODES} (grid has its own builder)")
    pairs = []
    for c in contours:
        box = bounding_rect(c)
        point = centroid(moments(c))
        if mode == "box-only":
            point = None
        if mode == "point-only":
            box = None
        pairs.append(PromptPair(box=box, point=point, source_contour=c.id))
    return PromptSet(image_id=image_id, width=width, height=height, mode=mode, pairs=tuple(pairs))


def build_grid_prompts(cfg: GridConfig, width: int, height: int, image_id: str = "") -> PromptSet:
    """N x N point lattice at uniform cell centers, row-major order.

    With pixel centers at integer coordinates, cell i of N spans
    [-0.5 + i*W/N, -0.5 + (i+1)*W/N), so its center is (i+0.5)*W/N - 0.5.
    """
    n = cfg.n
    pairs = []
    for j in range(n):
        cy = (j + 0.5) * height / n - 0.5
        for i in range(n):
            cx = (i + 0.5) * width / n - 0.5
            pairs.append(PromptPair(box=None, point=PointPrompt(cx, cy), source_contour=j * n + i + 1))
    return PromptSet(image_id=image_id, width=width, height=height, mode="grid", pairs=tuple(pairs))


def write_prompts(ps: PromptSet, path) -> None:
    doc = {
        "schema": SCHEMA,
        "image_id": ps.image_id,
        "width": ps.width,
        "height": ps.height,
        "mode": ps.mode,
        "convention": "xywh",
        "pairs": [
            {
                "k": p.source_contour,
                "box": [p.box.x0, p.box.y0, p.box.w, p.box.h] if p.box else None,
                "point": [p.point.cx, p.point.cy] if p.point else None,
                "label": p.point.label if p.point else 1,
            }
            for p in ps.pairs
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _require(doc: dict, key: str, kinds, where: str):
    if key not in doc:
        raise PromptSchemaError(f"{where}{key}", "missing required field")
    value = doc[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        wanted = kinds.__name__ if isinstance(kinds, type) else "/".join(k.__name__ for k in kinds)
        raise PromptSchemaError(f"{where}{key}", f"expected {wanted}, got {type(value).__name__}")
    return value


def read_prompts(path) -> PromptSet:
    """Parse and validate a prompt interchange file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PromptSchemaError("$", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise PromptSchemaError("$", "top level must be an object")
    schema = _require(doc, "schema", str, "")
    if schema != SCHEMA:
        raise PromptSchemaError("schema", f"expected {SCHEMA!r}, got {schema!r}")
    image_id = _require(doc, "image_id", str, "")
    width = _require(doc, "width", int, "")
    height = _require(doc, "height", int, "")
    mode = _require(doc, "mode", str, "")
    if mode not in MODES:
        raise PromptSchemaError("mode", f"unknown mode {mode!r}")
    convention = _require(doc, "convention", str, "")
    if convention != "xywh":
        raise PromptSchemaError("convention", f"expected 'xywh', got {convention!r}")
    raw_pairs = _require(doc, "pairs", list, "")
    pairs = []
    for i, raw in enumerate(raw_pairs):
        where = f"pairs[{i}]."
        if not isinstance(raw, dict):
            raise PromptSchemaError(f"pairs[{i}]", "pair must be an object")
        k = _require(raw, "k", int, where)
        if k < 1:
            raise PromptSchemaError(f"{where}k", "contour index must be >= 1")
        label = _require(raw, "label", int, where)
        if label < 1:
            raise PromptSchemaError(f"{where}label", "labels are always positive")
        box = None
        if raw.get("box") is not None:
            coords = _require(raw, "box", list, where)
            if len(coords) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in coords):
                raise PromptSchemaError(f"{where}box", "box must be [x0, y0, w, h] integers")
            try:
                box = BoundingBox(*coords)
            except ValueError as exc:
                raise PromptSchemaError(f"{where}box", str(exc)) from None
        point = None
        if raw.get("point") is not None:
            coords = _require(raw, "point", list, where)
            if len(coords) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in coords):
                raise PromptSchemaError(f"{where}point", "point must be [cx, cy] numbers")
            try:
                point = PointPrompt(float(coords[0]), float(coords[1]), label)
            except ValueError as exc:
                raise PromptSchemaError(f"{where}point", str(exc)) from None
        pairs.append(PromptPair(box=box, point=point, source_contour=k))
    try:
        return PromptSet(image_id=image_id, width=width, height=height, mode=mode, pairs=tuple(pairs))
    except ValueError as exc:
        raise PromptSchemaError("pairs", str(exc)) from None
