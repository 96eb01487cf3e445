import numpy as np
import pytest

from apg.raster import (
    BinaryMask,
    Heatmap,
    MalformedHeaderError,
    MalformedSampleError,
    MaxvalUnsupportedError,
    RgbImage,
    TruncatedPayloadError,
    quantize,
    read_image,
    read_mask,
    read_pgm,
    read_ppm,
    write_pgm,
    write_ppm,
)


def test_p5_exact_bytes(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5 2 2 255 " + bytes([0, 255, 120, 121]))
    h = read_pgm(path)
    assert (h.width, h.height) == (2, 2)
    assert h.values.tolist() == [[0, 255], [120, 121]]


def test_p2_single_pixel(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_text("P2\n1 1\n255\n7\n")
    h = read_pgm(path)
    assert (h.width, h.height) == (1, 1)
    assert h.values.tolist() == [[7]]


def test_comments_accepted_on_read(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5 # magic\n# a comment line\n2 1 # dims\n255\n" + bytes([9, 10]))
    assert read_pgm(path).values.tolist() == [[9, 10]]


def test_maxval_over_255_rejected(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5 1 1 65535 \x00\x00")
    with pytest.raises(MaxvalUnsupportedError) as err:
        read_pgm(path)
    assert err.value.offset == 7


def test_truncated_payload(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5 2 2 255 \x01\x02\x03")
    with pytest.raises(TruncatedPayloadError):
        read_pgm(path)


def test_p2_truncated_and_bad_samples(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_text("P2 2 2 255 1 2 3")
    with pytest.raises(TruncatedPayloadError):
        read_pgm(path)
    path.write_text("P2 1 1 255 zap")
    with pytest.raises(MalformedSampleError):
        read_pgm(path)
    path.write_text("P2 1 1 100 101")
    with pytest.raises(MalformedSampleError):
        read_pgm(path)


def test_bad_headers(tmp_path):
    path = tmp_path / "a.pgm"
    for payload in (b"P7 1 1 255 \x00", b"P5 0 1 255 ", b"P5 x 1 255 ", b"P5 1 1 0 \x00", b""):
        path.write_bytes(payload)
        with pytest.raises(MalformedHeaderError):
            read_pgm(path)


def test_no_rescaling_with_small_maxval(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5 2 1 100 " + bytes([100, 3]))
    assert read_pgm(path).values.tolist() == [[100, 3]]


def test_roundtrip_random_rasters(tmp_path):
    rng = np.random.RandomState(20)
    for i in range(200):
        w, h = rng.randint(1, 65), rng.randint(1, 65)
        raster = Heatmap.from_array(rng.randint(0, 256, size=(h, w), dtype=np.uint8))
        path = tmp_path / f"r{i}.pgm"
        write_pgm(raster, path)
        again = read_pgm(path)
        assert again == raster
        # no rescaling: extremes survive exactly
        assert again.values.min() == raster.values.min()
        assert again.values.max() == raster.values.max()


def test_mask_encoding_and_threshold_read(tmp_path):
    mask = BinaryMask.from_array([[0, 1]])
    path = tmp_path / "m.pgm"
    write_pgm(mask, path)
    assert path.read_bytes() == b"P5\n2 1\n255\n" + bytes([0, 255])
    assert read_mask(path) == mask


def test_ppm_roundtrip_and_read_image(tmp_path):
    rng = np.random.RandomState(7)
    img = RgbImage.from_array(rng.randint(0, 256, size=(5, 3, 3), dtype=np.uint8))
    path = tmp_path / "i.ppm"
    write_ppm(img, path)
    assert read_ppm(path) == img
    assert read_image(path) == img
    gray = Heatmap.from_array(rng.randint(0, 256, size=(4, 4), dtype=np.uint8))
    gpath = tmp_path / "g.pgm"
    write_pgm(gray, gpath)
    assert read_image(gpath) == gray


def test_empty_raster_rejected():
    with pytest.raises(ValueError):
        Heatmap(0, 0, np.zeros((0, 0), dtype=np.uint8))
    with pytest.raises(ValueError):
        BinaryMask.from_array(np.zeros((0, 5), dtype=np.uint8))


def test_mask_values_restricted():
    with pytest.raises(ValueError):
        BinaryMask.from_array([[0, 2]])


def test_quantize():
    assert quantize(0.0) == 0
    assert quantize(1.0) == 255
    assert quantize(-0.3) == 0
    assert quantize(1.7) == 255
    assert quantize(120.4 / 255) == 120
    assert quantize(np.array([0.0, 0.5, 1.0])).tolist() == [0, 128, 255]
