"""Command line interface.

Subcommands: ``run`` (pseudo-label a manifest), ``sweep`` (threshold
analysis), ``ablate`` (prompt-combination comparison), ``synth`` (generate
a synthetic corpus), ``eval`` (score existing masks against ground truth).

Exit codes: 0 success, 1 fatal configuration error, 2 when any per-image
backend error occurred (the batch still completes).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .binarize import BinarizeConfig
from .manifest import ManifestError, load_manifest
from .metrics import aggregate, evaluate, format_summary, write_metrics_csv
from .pipeline import (
    ABLATION_MODES,
    RunConfig,
    RunReport,
    STATUS_ERROR,
    ablate_prompts,
    run_pipeline,
    sweep_threshold,
)
from .prompts import MODES, GridConfig
from .raster import NetpbmError, read_mask
from .segmenter import MockSegmenterConfig
from .synth import SceneSpec, emit_corpus

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # Usage errors are fatal config errors: exit 1, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_run_flags(p: argparse.ArgumentParser, with_mode: bool = True) -> None:
    p.add_argument("--manifest", required=True, type=Path, help="dataset manifest CSV")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--threshold", type=int, default=120, help="binarization threshold (default 120)")
    p.add_argument("--min-area", type=int, default=0, help="drop components smaller than this")
    if with_mode:
        p.add_argument("--mode", choices=MODES, default="point+box", help="prompt combination")
    p.add_argument("--grid-n", type=int, default=8, help="points per edge in grid mode")
    p.add_argument("--segmenter", choices=("mock", "external"), default="mock")
    p.add_argument("--delta", type=int, default=10, help="mock segmenter intensity tolerance")
    p.add_argument(
        "--bridge-cmd",
        default="sam_bridge",
        help="command prefix for --segmenter external (image/prompt/out flags are appended)",
    )
    p.add_argument("--emit-negatives", action="store_true", help="write all-background masks for label-0 samples")
    p.add_argument("--eval", action=argparse.BooleanOptionalAction, default=True,
                   help="score masks against ground truth where available")


def _config(args, mode: str | None = None) -> RunConfig:
    return RunConfig(
        manifest=args.manifest,
        out_dir=args.out,
        binarize=BinarizeConfig(args.threshold),
        min_area=args.min_area,
        mode=mode if mode is not None else args.mode,
        grid=GridConfig(args.grid_n),
        segmenter=args.segmenter,
        mock=MockSegmenterConfig(args.delta),
        bridge_cmd=args.bridge_cmd,
        emit_negatives=args.emit_negatives,
        evaluate=args.eval,
    )


def _print_report(report: RunReport) -> None:
    counts: dict[str, int] = {}
    for e in report.entries:
        counts[e.status] = counts.get(e.status, 0) + 1
    print("samples:", ", ".join(f"{k}={v}" for k, v in sorted(counts.items())) or "none")
    if report.aggregate is not None:
        print("totals:", format_summary(report.aggregate))
    timed = {k: v for k, v in report.stage_seconds.items() if v > 0}
    if timed:
        print("stage seconds:", ", ".join(f"{k}={v:.3f}" for k, v in timed.items()))


def _exit_code(*reports: RunReport) -> int:
    return 2 if any(r.backend_errors for r in reports) else 0


def _cmd_run(args) -> int:
    report = run_pipeline(_config(args))
    _print_report(report)
    for e in report.entries:
        if e.status == STATUS_ERROR:
            print(f"error: {e.image_id}: {e.message}", file=sys.stderr)
    return _exit_code(report)


def _cmd_sweep(args) -> int:
    if args.t_step < 1:
        raise ValueError("--t-step must be >= 1")
    thresholds = list(range(args.t_start, args.t_stop + 1, args.t_step))
    cfg = _config(args, mode=args.mode)
    rows = sweep_threshold(cfg, thresholds)
    for row in rows:
        print(
            f"T={row['threshold']:3d} IoU={row['iou'] * 100:.2f}% "
            f"F1={row['f1'] * 100:.2f}% mean prompts={row['mean_prompts']:.2f}"
        )
    print(f"wrote {args.out / 'sweep.csv'}")
    return 0


def _cmd_ablate(args) -> int:
    reports = ablate_prompts(_config(args, mode="point+box"))
    for mode in ABLATION_MODES:
        agg = reports[mode].aggregate
        print(f"{mode}: {format_summary(agg) if agg else 'no ground truth'}")
    print(f"wrote {args.out / 'ablation.csv'}")
    return _exit_code(*reports.values())


def _cmd_synth(args) -> int:
    spec = SceneSpec(
        seed=args.seed,
        width=args.width,
        height=args.height,
        object_count=(args.min_objects, args.max_objects),
    )
    manifest = emit_corpus(spec, args.count, args.out)
    positives = sum(s.image_label for s in manifest)
    print(f"wrote {len(manifest)} samples ({positives} positive) under {args.out}")
    return 0


def _cmd_eval(args) -> int:
    manifest = load_manifest(args.manifest)
    per_image = []
    skipped = 0
    for sample in manifest:
        if sample.gt_mask_path is None:
            continue
        pred_path = args.pred_dir / f"{sample.id}.pgm"
        if not pred_path.exists():
            skipped += 1
            continue
        per_image.append((sample.id, evaluate(read_mask(pred_path), read_mask(sample.gt_mask_path))))
    if not per_image:
        print("nothing to evaluate (no ground truth + prediction pairs)", file=sys.stderr)
        return 1
    total = aggregate([r for _, r in per_image])
    print(f"evaluated {len(per_image)} images" + (f", {skipped} missing predictions" if skipped else ""))
    print("totals:", format_summary(total))
    if args.out is not None:
        write_metrics_csv(per_image, args.out)
        print(f"wrote {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="apg", description=__doc__.split("\n\n")[1])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="generate pseudo-masks for a manifest")
    _add_run_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="rerun the pipeline over a threshold range")
    _add_run_flags(p_sweep, with_mode=False)
    p_sweep.add_argument("--mode", choices=ABLATION_MODES, default="point+box")
    p_sweep.add_argument("--t-start", type=int, default=50)
    p_sweep.add_argument("--t-stop", type=int, default=170)
    p_sweep.add_argument("--t-step", type=int, default=10)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_ablate = sub.add_parser("ablate", help="compare point+box / box-only / point-only")
    _add_run_flags(p_ablate, with_mode=False)
    p_ablate.set_defaults(func=_cmd_ablate)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--count", type=int, required=True)
    p_synth.add_argument("--out", type=Path, required=True)
    p_synth.add_argument("--width", type=int, default=256)
    p_synth.add_argument("--height", type=int, default=256)
    p_synth.add_argument("--min-objects", type=int, default=0)
    p_synth.add_argument("--max-objects", type=int, default=3)
    p_synth.set_defaults(func=_cmd_synth)

    p_eval = sub.add_parser("eval", help="score existing masks against ground truth")
    p_eval.add_argument("--manifest", required=True, type=Path)
    p_eval.add_argument("--pred-dir", required=True, type=Path, help="directory of <id>.pgm masks")
    p_eval.add_argument("--out", type=Path, default=None, help="write a metrics CSV here")
    p_eval.set_defaults(func=_cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ManifestError, NetpbmError, ValueError, OSError) as exc:
        print(f"apg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
