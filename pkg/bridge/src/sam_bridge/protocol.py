"""apg/1 prompt interchange parsing, validated independently on this side
of the process boundary.

Box convention is ``xywh`` in the file; :func:`PromptFile.corner_boxes`
performs the xywh -> (x0, y0, x1, y1) conversion the segmenter expects.
That one line is the most error-prone spot in the whole protocol, so it
lives here, once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

__all__ = ["SchemaError", "Pair", "PromptFile", "load_prompt_file"]

SCHEMA = "apg/1"
MODES = ("point+box", "box-only", "point-only", "grid")


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class Pair:
    k: int
    box: tuple[int, int, int, int] | None  # xywh
    point: tuple[float, float] | None
    label: int


@dataclass(frozen=True)
class PromptFile:
    image_id: str
    width: int
    height: int
    mode: str
    pairs: tuple[Pair, ...]

    def corner_boxes(self) -> list[tuple[int, int, int, int] | None]:
        """xywh -> (x0, y0, x1, y1) with exclusive corner at x0+w, y0+h."""
        return [
            (b[0], b[1], b[0] + b[2], b[1] + b[3]) if (b := pair.box) is not None else None
            for pair in self.pairs
        ]


def _field(doc: dict, key: str, kind, where: str = ""):
    if key not in doc:
        raise SchemaError(f"missing field {where}{key}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(f"field {where}{key} has wrong type {type(value).__name__}")
    return value


def load_prompt_file(path) -> PromptFile:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse prompt file: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    if _field(doc, "schema", str) != SCHEMA:
        raise SchemaError(f"schema must be {SCHEMA!r}")
    if _field(doc, "convention", str) != "xywh":
        raise SchemaError("convention must be 'xywh'")
    image_id = _field(doc, "image_id", str)
    width = _field(doc, "width", int)
    height = _field(doc, "height", int)
    mode = _field(doc, "mode", str)
    if mode not in MODES:
        raise SchemaError(f"unknown mode {mode!r}")
    if width < 1 or height < 1:
        raise SchemaError("width and height must be positive")
    pairs = []
    for i, raw in enumerate(_field(doc, "pairs", list)):
        where = f"pairs[{i}]."
        if not isinstance(raw, dict):
            raise SchemaError(f"pairs[{i}] must be an object")
        k = _field(raw, "k", int, where)
        label = _field(raw, "label", int, where)
        if label < 1:
            raise SchemaError(f"{where}label must be positive")
        box = None
        if raw.get("box") is not None:
            coords = _field(raw, "box", list, where)
            if len(coords) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in coords):
                raise SchemaError(f"{where}box must be four integers")
            x0, y0, w, h = coords
            if w < 1 or h < 1 or x0 < 0 or y0 < 0 or x0 + w > width or y0 + h > height:
                raise SchemaError(f"{where}box out of bounds")
            box = (x0, y0, w, h)
        point = None
        if raw.get("point") is not None:
            coords = _field(raw, "point", list, where)
            if len(coords) != 2 or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in coords
            ):
                raise SchemaError(f"{where}point must be two numbers")
            cx, cy = float(coords[0]), float(coords[1])
            if not (0 <= cx <= width - 1 and 0 <= cy <= height - 1):
                raise SchemaError(f"{where}point out of bounds")
            point = (cx, cy)
        if box is None and point is None:
            raise SchemaError(f"pairs[{i}] carries neither box nor point")
        pairs.append(Pair(k=k, box=box, point=point, label=label))
    return PromptFile(image_id=image_id, width=width, height=height, mode=mode, pairs=tuple(pairs))
