"""End-to-end driver: heatmap -> mask -> contours -> prompts -> pseudo-mask.

Negative samples (image-level label 0) are skipped outright and leave no
output files unless ``emit_negatives`` asks for all-background masks.
Per-image failures are recorded in the run report and the batch continues;
only an unreadable manifest is fatal. Outputs are a deterministic function
of config + corpus: masks under ``masks/``, prompt files under
``prompts/``, plus ``report.csv`` and (with ground truth) ``metrics.csv``.
"""

from __future__ import annotations

import csv
import logging
import shlex
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .binarize import BinarizeConfig, binarize
from .contour import find_contours
from .manifest import Manifest, load_manifest
from .metrics import MetricsReport, aggregate, evaluate, write_metrics_csv
from .prompts import GridConfig, build_grid_prompts, build_prompts, write_prompts
from .raster import BinaryMask, read_image, read_mask, read_pgm, write_pgm
from .segmenter import (
    ExternalSegmenter,
    MockSegmenter,
    MockSegmenterConfig,
    Segmenter,
    SegmenterRequest,
)

__all__ = [
    "RunConfig",
    "SampleResult",
    "RunReport",
    "run_pipeline",
    "sweep_threshold",
    "ablate_prompts",
    "STATUS_PROCESSED",
    "STATUS_SKIPPED",
    "STATUS_EMPTY",
    "STATUS_ERROR",
    "ABLATION_MODES",
]

log = logging.getLogger(__name__)

STATUS_PROCESSED = "processed"
STATUS_SKIPPED = "skipped-negative"
STATUS_EMPTY = "empty-prompts"
STATUS_ERROR = "backend-error"

ABLATION_MODES = ("point+box", "box-only", "point-only")
_MODE_DIRS = {"point+box": "point_box", "box-only": "box_only", "point-only": "point_only"}


@dataclass(frozen=True)
class RunConfig:
    manifest: Path
    out_dir: Path
    binarize: BinarizeConfig = BinarizeConfig()
    min_area: int = 0
    mode: str = "point+box"
    grid: GridConfig = GridConfig()
    segmenter: str = "mock"  # "mock" or "external"
    mock: MockSegmenterConfig = MockSegmenterConfig()
    bridge_cmd: str = "sam_bridge"
    emit_negatives: bool = False
    evaluate: bool = True


@dataclass(frozen=True)
class SampleResult:
    image_id: str
    status: str
    prompt_count: int = 0
    foreground_px: int = 0
    metrics: MetricsReport | None = None
    message: str = ""


@dataclass(frozen=True)
class RunReport:
    entries: tuple[SampleResult, ...]
    aggregate: MetricsReport | None
    stage_seconds: dict[str, float] = field(default_factory=dict)

    @property
    def backend_errors(self) -> int:
        return sum(1 for e in self.entries if e.status == STATUS_ERROR)


def _make_segmenter(cfg: RunConfig) -> Segmenter:
    if cfg.segmenter == "mock":
        return MockSegmenter(cfg.mock)
    if cfg.segmenter == "external":
        return ExternalSegmenter(tuple(shlex.split(cfg.bridge_cmd)))
    raise ValueError(f"unknown segmenter backend {cfg.segmenter!r}")


def run_pipeline(cfg: RunConfig) -> RunReport:
    manifest = load_manifest(cfg.manifest)  # unreadable manifest is fatal
    return _run_on_manifest(cfg, manifest)


def _run_on_manifest(cfg: RunConfig, manifest: Manifest) -> RunReport:
    out = Path(cfg.out_dir)
    masks_dir = out / "masks"
    prompts_dir = out / "prompts"
    masks_dir.mkdir(parents=True, exist_ok=True)
    prompts_dir.mkdir(parents=True, exist_ok=True)
    segmenter = _make_segmenter(cfg)

    entries: list[SampleResult] = []
    stages = {"binarize": 0.0, "contour": 0.0, "prompt": 0.0, "segment": 0.0, "evaluate": 0.0}
    for sample in manifest:
        if sample.image_label == 0:
            if cfg.emit_negatives:
                heat = read_pgm(sample.heatmap_path)
                write_pgm(BinaryMask.zeros(heat.width, heat.height), masks_dir / f"{sample.id}.pgm")
            entries.append(SampleResult(sample.id, STATUS_SKIPPED))
            continue
        try:
            entries.append(
                _process_sample(cfg, sample, segmenter, masks_dir, prompts_dir, stages)
            )
        except Exception as exc:  # per-image isolation: record and continue
            log.warning("sample %s failed: %s", sample.id, exc)
            entries.append(SampleResult(sample.id, STATUS_ERROR, message=str(exc)))

    evaluated = [(e.image_id, e.metrics) for e in entries if e.metrics is not None]
    total = aggregate([m for _, m in evaluated]) if evaluated else None
    _write_report_csv(entries, out / "report.csv")
    if evaluated:
        write_metrics_csv(evaluated, out / "metrics.csv")
    return RunReport(tuple(entries), total, stages)


def _process_sample(cfg, sample, segmenter, masks_dir, prompts_dir, stages) -> SampleResult:
    heat = read_pgm(sample.heatmap_path)
    fg_count = 0
    if cfg.mode == "grid":
        t0 = time.perf_counter()
        prompt_set = build_grid_prompts(cfg.grid, heat.width, heat.height, sample.id)
        stages["prompt"] += time.perf_counter() - t0
    else:
        t0 = time.perf_counter()
        mask = binarize(heat, cfg.binarize)
        stages["binarize"] += time.perf_counter() - t0
        fg_count = mask.foreground_count
        t0 = time.perf_counter()
        contours = find_contours(mask, cfg.min_area)
        stages["contour"] += time.perf_counter() - t0
        t0 = time.perf_counter()
        prompt_set = build_prompts(contours, cfg.mode, heat.width, heat.height, sample.id)
        stages["prompt"] += time.perf_counter() - t0

    prompts_path = prompts_dir / f"{sample.id}.json"
    write_prompts(prompt_set, prompts_path)

    image = read_image(sample.image_path)
    if (image.width, image.height) != (heat.width, heat.height):
        raise ValueError(
            f"image is {image.width}x{image.height} but heatmap is {heat.width}x{heat.height}"
        )
    t0 = time.perf_counter()
    pseudo = segmenter.segment(
        SegmenterRequest(image, prompt_set, Path(sample.image_path), prompts_path)
    )
    stages["segment"] += time.perf_counter() - t0
    write_pgm(pseudo, masks_dir / f"{sample.id}.pgm")

    report = None
    if cfg.evaluate and sample.gt_mask_path is not None:
        t0 = time.perf_counter()
        report = evaluate(pseudo, read_mask(sample.gt_mask_path))
        stages["evaluate"] += time.perf_counter() - t0
    status = STATUS_PROCESSED if prompt_set.pairs else STATUS_EMPTY
    return SampleResult(sample.id, status, len(prompt_set.pairs), fg_count, report)


def _write_report_csv(entries, path) -> None:
    # No timings or messages here: the report must be byte-stable across reruns.
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "status", "prompt_count", "foreground_px"])
        for e in entries:
            writer.writerow([e.image_id, e.status, e.prompt_count, e.foreground_px])


def sweep_threshold(cfg: RunConfig, thresholds: list[int]) -> list[dict]:
    """Run the full pipeline once per threshold; tabulate IoU/F1/mean prompts.

    Requires ground truth for every positive sample. Writes ``sweep.csv``
    (one row per threshold) and ``sweep_detail.csv`` (per image per
    threshold: binarized foreground pixels and prompt count), plus one full
    run tree per threshold under ``t<T>``.
    """
    if cfg.mode == "grid":
        raise ValueError("threshold sweep is meaningless in grid mode")
    manifest = load_manifest(cfg.manifest)
    missing = [s.id for s in manifest if s.image_label == 1 and s.gt_mask_path is None]
    if missing:
        raise ValueError(f"sweep needs ground truth for all positive samples; missing: {missing}")

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    details = []
    for t in thresholds:
        sub = replace(cfg, binarize=BinarizeConfig(t), out_dir=out / f"t{t:03d}")
        report = _run_on_manifest(sub, manifest)
        active = [e for e in report.entries if e.status in (STATUS_PROCESSED, STATUS_EMPTY)]
        mean_k = sum(e.prompt_count for e in active) / len(active) if active else 0.0
        rows.append(
            {
                "threshold": t,
                "iou": report.aggregate.iou if report.aggregate else 0.0,
                "f1": report.aggregate.f1 if report.aggregate else 0.0,
                "mean_prompts": mean_k,
            }
        )
        for e in active:
            details.append(
                {
                    "threshold": t,
                    "image_id": e.image_id,
                    "foreground_px": e.foreground_px,
                    "prompt_count": e.prompt_count,
                }
            )

    with open(out / "sweep.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["threshold", "iou", "f1", "mean_prompts"], lineterminator="\n"
        )
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {
                    "threshold": row["threshold"],
                    "iou": f"{row['iou']:.6f}",
                    "f1": f"{row['f1']:.6f}",
                    "mean_prompts": f"{row['mean_prompts']:.3f}",
                }
            )
    with open(out / "sweep_detail.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["threshold", "image_id", "foreground_px", "prompt_count"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(details)
    return rows


def ablate_prompts(cfg: RunConfig) -> dict[str, RunReport]:
    """Run the three prompt combinations with otherwise identical config.

    Emits ``ablation.csv`` with one row per mode, in the fixed order
    point+box, box-only, point-only.
    """
    manifest = load_manifest(cfg.manifest)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports: dict[str, RunReport] = {}
    for mode in ABLATION_MODES:
        sub = replace(cfg, mode=mode, out_dir=out / _MODE_DIRS[mode])
        reports[mode] = _run_on_manifest(sub, manifest)
    with open(out / "ablation.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mode", "oa", "precision", "recall", "f1", "iou"])
        for mode in ABLATION_MODES:
            agg = reports[mode].aggregate
            if agg is None:
                writer.writerow([mode, "", "", "", "", ""])
            else:
                writer.writerow(
                    [mode]
                    + [f"{getattr(agg, name):.6f}" for name in ("oa", "precision", "recall", "f1", "iou")]
                )
    return reports
