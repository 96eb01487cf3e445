import numpy as np
import pytest

from apg.contour import Contour, PixelCoord, find_contours
from apg.geometry import (
    BoundingBox,
    EmptyContourError,
    MomentSet,
    bounding_rect,
    centroid,
    moments,
)
from apg.raster import BinaryMask

from oracles import direct_moments, minmax_box


def _contour(region):
    region = frozenset(PixelCoord(x, y) for x, y in region)
    start = min(region, key=lambda p: (p.y, p.x))
    return Contour(id=1, boundary=(start,), region=region)


def test_single_pixel():
    c = _contour({(5, 7)})
    assert bounding_rect(c) == BoundingBox(5, 7, 1, 1)
    m = moments(c)
    assert (m.m00, m.m10, m.m01) == (1, 5, 7)
    p = centroid(m)
    assert (p.cx, p.cy) == (5.0, 7.0)


def test_connected_span():
    region = {(2, 3), (3, 4), (3, 5), (4, 6), (4, 7)}
    assert bounding_rect(_contour(region)) == BoundingBox(2, 3, 3, 5)
    assert minmax_box(region) == (2, 3, 3, 5)


def test_full_raster():
    grid = np.ones((4, 6), dtype=np.uint8)
    cs = find_contours(BinaryMask.from_array(grid))
    assert bounding_rect(cs.contours[0]) == BoundingBox(0, 0, 6, 4)


def test_two_by_two_block():
    c = _contour({(2, 2), (3, 2), (2, 3), (3, 3)})
    m = moments(c)
    assert (m.m00, m.m10, m.m01) == (4, 10, 10)
    p = centroid(m)
    assert (p.cx, p.cy) == (2.5, 2.5)


def test_l_shape():
    c = _contour({(0, 0), (1, 0), (0, 1)})
    m = moments(c)
    assert (m.m00, m.m10, m.m01) == (3, 1, 1)
    p = centroid(m)
    assert p.cx == pytest.approx(1 / 3, abs=1e-15)
    assert p.cy == pytest.approx(1 / 3, abs=1e-15)
    assert p.label == 1


def test_centroid_undefined_at_zero_area():
    assert centroid(MomentSet(0, 0, 0)) is None


def test_empty_region_rejected():
    c = _contour({(0, 0)})
    object.__setattr__(c, "region", frozenset())
    with pytest.raises(EmptyContourError):
        bounding_rect(c)


def test_fuzz_against_oracles():
    rng = np.random.RandomState(31)
    for _ in range(60):
        w, h = rng.randint(1, 65), rng.randint(1, 65)
        mask = BinaryMask.from_array((rng.random_sample((h, w)) < 0.3).astype(np.uint8))
        for c in find_contours(mask):
            box = bounding_rect(c)
            assert (box.x0, box.y0, box.w, box.h) == minmax_box(c.region)
            m = moments(c)
            assert (m.m00, m.m10, m.m01) == direct_moments(c.region)
            p = centroid(m)
            assert abs(p.cx - m.m10 / m.m00) < 1e-9
            # containment: centroid inside the box
            assert box.contains(p.cx, p.cy)


def test_translation_covariance():
    rng = np.random.RandomState(37)
    base = {(int(x), int(y)) for x, y in rng.randint(0, 20, size=(30, 2))}
    dx, dy = 13, 4
    shifted = {(x + dx, y + dy) for x, y in base}
    m0, m1 = moments(_contour(base)), moments(_contour(shifted))
    p0, p1 = centroid(m0), centroid(m1)
    assert p1.cx == pytest.approx(p0.cx + dx, abs=1e-9)
    assert p1.cy == pytest.approx(p0.cy + dy, abs=1e-9)
    b0, b1 = bounding_rect(_contour(base)), bounding_rect(_contour(shifted))
    assert (b1.x0, b1.y0, b1.w, b1.h) == (b0.x0 + dx, b0.y0 + dy, b0.w, b0.h)


def test_box_validation():
    with pytest.raises(ValueError):
        BoundingBox(0, 0, 0, 1)
    with pytest.raises(ValueError):
        BoundingBox(-1, 0, 1, 1)
