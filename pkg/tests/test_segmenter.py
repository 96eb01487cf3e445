import numpy as np
import pytest

from apg.geometry import BoundingBox, PointPrompt
from apg.prompts import GridConfig, PromptPair, PromptSet, build_grid_prompts
from apg.raster import BinaryMask, DimensionMismatchError, Heatmap, RgbImage
from apg.segmenter import (
    BackendError,
    ExternalSegmenter,
    MockSegmenter,
    MockSegmenterConfig,
    SegmenterRequest,
    union_masks,
)

from oracles import flood_fill_loop


def _empty_prompts(w, h):
    return PromptSet("img", w, h, "point+box", ())


def test_empty_prompts_all_background():
    image = Heatmap.from_array(np.full((5, 5), 200, dtype=np.uint8))
    out = MockSegmenter().segment(SegmenterRequest(image, _empty_prompts(5, 5)))
    assert out == BinaryMask.zeros(5, 5)


def test_uniform_rectangle_fills_its_box():
    grid = np.full((8, 10), 30, dtype=np.uint8)
    grid[2:6, 3:8] = 77
    image = Heatmap.from_array(grid)
    ps = PromptSet(
        "img", 10, 8, "box-only", (PromptPair(BoundingBox(3, 2, 5, 4), None, 1),)
    )
    out = MockSegmenter(MockSegmenterConfig(delta=0)).segment(SegmenterRequest(image, ps))
    expected = np.zeros((8, 10), dtype=np.uint8)
    expected[2:6, 3:8] = 1
    assert out.values.tolist() == expected.tolist()


def test_bright_square_recovered_exactly():
    grid = np.full((20, 20), 20, dtype=np.uint8)
    grid[7:13, 5:11] = 200
    image = Heatmap.from_array(grid)
    ps = PromptSet(
        "img",
        20,
        20,
        "point+box",
        (PromptPair(BoundingBox(5, 7, 6, 6), PointPrompt(7.5, 9.5), 1),),
    )
    out = MockSegmenter(MockSegmenterConfig(delta=10)).segment(SegmenterRequest(image, ps))
    assert out.values.tolist() == (grid == 200).astype(int).tolist()


def test_point_only_flat_component():
    grid = np.array(
        [
            [9, 9, 9, 9],
            [9, 50, 9, 9],
            [9, 9, 9, 9],
        ],
        dtype=np.uint8,
    )
    image = Heatmap.from_array(grid)
    ps = PromptSet("img", 4, 3, "point-only", (PromptPair(None, PointPrompt(1.0, 1.0), 1),))
    out = MockSegmenter(MockSegmenterConfig(delta=0)).segment(SegmenterRequest(image, ps))
    assert out.foreground_count == 1
    assert out.values[1, 1] == 1


def test_matches_flood_fill_oracle():
    rng = np.random.RandomState(9)
    for _ in range(25):
        w, h = rng.randint(2, 24), rng.randint(2, 24)
        grid = rng.randint(0, 256, size=(h, w)).astype(np.uint8)
        image = Heatmap.from_array(grid)
        cx, cy = int(rng.randint(0, w)), int(rng.randint(0, h))
        delta = int(rng.randint(0, 40))
        ps = PromptSet(
            "img", w, h, "point-only", (PromptPair(None, PointPrompt(float(cx), float(cy)), 1),)
        )
        out = MockSegmenter(MockSegmenterConfig(delta)).segment(SegmenterRequest(image, ps))
        expect = flood_fill_loop(grid.astype(int).tolist(), (cx, cy), delta)
        got = {(x, y) for y, row in enumerate(out.values.tolist()) for x, v in enumerate(row) if v}
        assert got == expect


def test_box_clips_contribution():
    rng = np.random.RandomState(21)
    grid = np.full((16, 16), 100, dtype=np.uint8)  # one flat region everywhere
    image = Heatmap.from_array(grid)
    box = BoundingBox(4, 6, 5, 3)
    ps = PromptSet("img", 16, 16, "point+box", (PromptPair(box, PointPrompt(6.0, 7.0), 1),))
    out = MockSegmenter(MockSegmenterConfig(0)).segment(SegmenterRequest(image, ps))
    for y, row in enumerate(out.values.tolist()):
        for x, v in enumerate(row):
            inside = box.x0 <= x < box.x0 + box.w and box.y0 <= y < box.y0 + box.h
            assert v == (1 if inside else 0)


def test_monotone_in_delta():
    rng = np.random.RandomState(33)
    grid = rng.randint(0, 256, size=(24, 24)).astype(np.uint8)
    image = Heatmap.from_array(grid)
    ps = PromptSet("img", 24, 24, "point-only", (PromptPair(None, PointPrompt(12.0, 12.0), 1),))
    prev = 0
    for delta in (0, 16, 64, 255):
        out = MockSegmenter(MockSegmenterConfig(delta)).segment(SegmenterRequest(image, ps))
        assert out.foreground_count >= prev
        prev = out.foreground_count
    assert prev == 24 * 24  # delta 255 admits every pixel


def test_deterministic():
    rng = np.random.RandomState(41)
    grid = rng.randint(0, 256, size=(20, 20)).astype(np.uint8)
    image = Heatmap.from_array(grid)
    ps = build_grid_prompts(GridConfig(3), 20, 20, "img")
    a = MockSegmenter().segment(SegmenterRequest(image, ps))
    b = MockSegmenter().segment(SegmenterRequest(image, ps))
    assert a == b
    assert a.values.tobytes() == b.values.tobytes()


def test_rgb_distance_is_max_channel():
    grid = np.zeros((1, 3, 3), dtype=np.uint8)
    grid[0, 0] = (100, 100, 100)
    grid[0, 1] = (105, 100, 100)  # within delta 5
    grid[0, 2] = (100, 100, 110)  # blue channel too far
    image = RgbImage.from_array(grid)
    ps = PromptSet("img", 3, 1, "point-only", (PromptPair(None, PointPrompt(0.0, 0.0), 1),))
    out = MockSegmenter(MockSegmenterConfig(5)).segment(SegmenterRequest(image, ps))
    assert out.values.tolist() == [[1, 1, 0]]


def test_union_masks():
    m = BinaryMask.from_array([[1, 0], [0, 0]])
    zero = BinaryMask.zeros(2, 2)
    assert union_masks([m, zero]) == m
    assert union_masks([m, m]) == m
    other = BinaryMask.from_array([[0, 0], [0, 1]])
    assert union_masks([m, other]).values.tolist() == [[1, 0], [0, 1]]
    with pytest.raises(DimensionMismatchError):
        union_masks([m, BinaryMask.zeros(3, 3)])
    with pytest.raises(ValueError):
        union_masks([])


def test_request_dimension_check():
    image = Heatmap.from_array(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(DimensionMismatchError):
        SegmenterRequest(image, _empty_prompts(5, 5))


def test_external_requires_paths():
    image = Heatmap.from_array(np.zeros((4, 4), dtype=np.uint8))
    seg = ExternalSegmenter(("true",))
    with pytest.raises(BackendError):
        seg.segment(SegmenterRequest(image, _empty_prompts(4, 4)))


def test_external_missing_command(tmp_path):
    image = Heatmap.from_array(np.zeros((4, 4), dtype=np.uint8))
    seg = ExternalSegmenter(("definitely-not-a-real-command-xyz",))
    req = SegmenterRequest(
        image, _empty_prompts(4, 4), tmp_path / "i.pgm", tmp_path / "p.json"
    )
    with pytest.raises(BackendError):
        seg.segment(req)
