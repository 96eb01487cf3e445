"""Adaptive prompt generation for promptable segmenters.

Turns class-activation heatmaps into hybrid point/box prompts, drives a
promptable segmenter (a deterministic mock or an external bridge process)
to produce pseudo-masks, and evaluates the results.
"""

from .binarize import BinarizeConfig, binarize
from .contour import Contour, ContourSet, PixelCoord, find_contours
from .geometry import BoundingBox, MomentSet, PointPrompt, bounding_rect, centroid, moments
from .manifest import ImageSample, Manifest, load_manifest, write_manifest
from .metrics import MetricsReport, aggregate, evaluate
from .pipeline import RunConfig, RunReport, ablate_prompts, run_pipeline, sweep_threshold
from .prompts import (
    GridConfig,
    PromptPair,
    PromptSet,
    build_grid_prompts,
    build_prompts,
    read_prompts,
    write_prompts,
)
from .raster import (
    BinaryMask,
    Heatmap,
    RgbImage,
    quantize,
    read_image,
    read_mask,
    read_pgm,
    read_ppm,
    write_pgm,
    write_ppm,
)
from .segmenter import (
    ExternalSegmenter,
    MockSegmenter,
    MockSegmenterConfig,
    Segmenter,
    SegmenterRequest,
    union_masks,
)
from .synth import SceneSpec, SplitMix64, emit_corpus, generate

__version__ = "0.1.0"
