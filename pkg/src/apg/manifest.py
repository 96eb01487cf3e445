"""Dataset manifest: one CSV row per sample, carrying the image-level label.

Header is fixed: ``id,image,heatmap,label,gt_mask``. Paths are stored
relative to the manifest file; ``gt_mask`` may be empty. UTF-8, LF endings.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "ImageSample",
    "Manifest",
    "ManifestError",
    "DuplicateIdError",
    "LabelOutOfRangeError",
    "MissingColumnError",
    "load_manifest",
    "write_manifest",
]

_COLUMNS = ("id", "image", "heatmap", "label", "gt_mask")


class ManifestError(ValueError):
    pass


class DuplicateIdError(ManifestError):
    pass


class LabelOutOfRangeError(ManifestError):
    pass


class MissingColumnError(ManifestError):
    pass


@dataclass(frozen=True)
class ImageSample:
    id: str
    image_path: Path
    heatmap_path: Path
    image_label: int  # 1 = object present, 0 = negative sample
    gt_mask_path: Path | None = None

    def __post_init__(self):
        if self.image_label not in (0, 1):
            raise LabelOutOfRangeError(f"label must be 0 or 1, got {self.image_label!r}")
        if not self.id:
            raise ManifestError("sample id must be non-empty")


@dataclass(frozen=True)
class Manifest:
    samples: tuple[ImageSample, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        seen: set[str] = set()
        for s in self.samples:
            if s.id in seen:
                raise DuplicateIdError(f"duplicate sample id {s.id!r}")
            seen.add(s.id)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)


def load_manifest(path) -> Manifest:
    """Parse a manifest CSV; paths resolve relative to the manifest file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return Manifest(())
    base = path.parent
    reader = csv.DictReader(text.splitlines())
    header = reader.fieldnames or []
    missing = [c for c in _COLUMNS if c not in header]
    if missing:
        raise MissingColumnError(f"manifest missing required column(s): {', '.join(missing)}")
    samples = []
    for lineno, row in enumerate(reader, start=2):
        sid = (row["id"] or "").strip()
        label_text = (row["label"] or "").strip()
        if label_text not in ("0", "1"):
            raise LabelOutOfRangeError(
                f"line {lineno}: label must be 0 or 1, got {label_text!r}"
            )
        gt = (row["gt_mask"] or "").strip()
        samples.append(
            ImageSample(
                id=sid,
                image_path=base / row["image"].strip(),
                heatmap_path=base / row["heatmap"].strip(),
                image_label=int(label_text),
                gt_mask_path=(base / gt) if gt else None,
            )
        )
    return Manifest(tuple(samples))


def write_manifest(manifest: Manifest, path) -> None:
    """Write a manifest CSV with paths relative to its location."""
    path = Path(path)

    def rel(p: Path | None) -> str:
        if p is None:
            return ""
        return os.path.relpath(p, path.parent)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for s in manifest:
            writer.writerow([s.id, rel(s.image_path), rel(s.heatmap_path), s.image_label, rel(s.gt_mask_path)])
