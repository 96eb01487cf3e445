"""Bridge entry point: one segmentation request per process invocation.

``sam_bridge --image I --prompts P --out M [--mode per-pair|single-call]
[--checkpoint C] [--model-type auto|vit_h|vit_l|vit_b]``

Exit 0 with a mask written to ``--out`` on success. On failure, exit
nonzero with one ``reason: detail`` line on stderr; reasons are ``schema``
(prompt file invalid), ``weights`` (checkpoint missing), ``dims`` (prompt
and image dimensions disagree), ``backend`` (anything else). The
empty-prompt contract needs no model: it writes an all-background mask and
exits 0 even with no checkpoint installed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .netpbm import NetpbmError, read_image, write_mask
from .protocol import PromptFile, SchemaError, load_prompt_file

_MODEL_TYPES = ("vit_h", "vit_l", "vit_b")


def _fail(reason: str, detail: str) -> int:
    print(f"{reason}: {detail}", file=sys.stderr)
    return 1


def _infer_model_type(checkpoint: Path) -> str:
    name = checkpoint.name.lower()
    for model_type in _MODEL_TYPES:
        if model_type in name:
            return model_type
    return "vit_h"


def _decode(image: np.ndarray, prompts: PromptFile, mode: str, checkpoint: Path, model_type: str) -> np.ndarray:
    try:
        import torch  # noqa: F401  (segment_anything needs it at import time)
        from segment_anything import SamPredictor, sam_model_registry
    except ImportError as exc:
        raise RuntimeError(f"segmenter backend unavailable: {exc}") from None

    if model_type == "auto":
        model_type = _infer_model_type(checkpoint)
    sam = sam_model_registry[model_type](checkpoint=str(checkpoint))
    predictor = SamPredictor(sam)
    predictor.set_image(image)

    height, width = image.shape[:2]
    out = np.zeros((height, width), dtype=np.uint8)
    corner_boxes = prompts.corner_boxes()

    if mode == "single-call":
        points = [p.point for p in prompts.pairs if p.point is not None]
        labels = [p.label for p in prompts.pairs if p.point is not None]
        boxes = [b for b in corner_boxes if b is not None]
        masks, _, _ = predictor.predict(
            point_coords=np.array(points, dtype=np.float32) if points else None,
            point_labels=np.array(labels, dtype=np.int32) if points else None,
            box=np.array(boxes[0], dtype=np.float32) if boxes else None,  # one box at most
            multimask_output=False,
        )
        out |= masks[0].astype(np.uint8)
        return out

    for pair, box in zip(prompts.pairs, corner_boxes):
        masks, _, _ = predictor.predict(
            point_coords=np.array([pair.point], dtype=np.float32) if pair.point else None,
            point_labels=np.array([pair.label], dtype=np.int32) if pair.point else None,
            box=np.array(box, dtype=np.float32) if box is not None else None,
            multimask_output=False,
        )
        out |= masks[0].astype(np.uint8)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sam_bridge", description=__doc__.split("\n\n")[1])
    parser.add_argument("--image", required=True, type=Path)
    parser.add_argument("--prompts", required=True, type=Path)
    parser.add_argument("--out", required=True, type=Path)
    parser.add_argument("--mode", choices=("per-pair", "single-call"), default="per-pair")
    parser.add_argument("--checkpoint", type=Path, default=None,
                        help="model weights; required unless the prompt file is empty")
    parser.add_argument("--model-type", choices=("auto",) + _MODEL_TYPES, default="auto")
    args = parser.parse_args(argv)

    try:
        prompts = load_prompt_file(args.prompts)
    except SchemaError as exc:
        return _fail("schema", str(exc))

    try:
        image = read_image(args.image)
    except (OSError, NetpbmError) as exc:
        return _fail("backend", f"cannot read image: {exc}")

    height, width = image.shape[:2]
    if (width, height) != (prompts.width, prompts.height):
        return _fail(
            "dims",
            f"prompt file declares {prompts.width}x{prompts.height}, image is {width}x{height}",
        )

    if not prompts.pairs:
        # Contract parity with the pipeline's mock: empty prompts decode to
        # an all-background mask, no model required.
        write_mask(np.zeros((height, width), dtype=np.uint8), args.out)
        return 0

    if args.checkpoint is None:
        return _fail("weights", "a checkpoint is required for non-empty prompt files")
    if not args.checkpoint.exists():
        return _fail("weights", f"checkpoint not found: {args.checkpoint}")

    try:
        mask = _decode(image, prompts, args.mode, args.checkpoint, args.model_type)
    except Exception as exc:
        return _fail("backend", str(exc))

    try:
        write_mask(mask, args.out)
    except OSError as exc:
        return _fail("backend", f"cannot write mask: {exc}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
