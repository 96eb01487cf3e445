import pytest

from apg.manifest import (
    DuplicateIdError,
    ImageSample,
    LabelOutOfRangeError,
    Manifest,
    MissingColumnError,
    load_manifest,
    write_manifest,
)

HEADER = "id,image,heatmap,label,gt_mask\n"


def test_two_rows(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "a,a.pgm,a_h.pgm,1,a_gt.pgm\nb,b.ppm,b_h.pgm,0,\n")
    m = load_manifest(path)
    assert len(m) == 2
    a, b = m.samples
    assert a.image_path == tmp_path / "a.pgm"
    assert a.gt_mask_path == tmp_path / "a_gt.pgm"
    assert (a.image_label, b.image_label) == (1, 0)
    assert b.gt_mask_path is None


def test_label_out_of_range(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "a,a.pgm,h.pgm,2,\n")
    with pytest.raises(LabelOutOfRangeError):
        load_manifest(path)


def test_empty_file(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("")
    assert len(load_manifest(path)) == 0
    path.write_text(HEADER)
    assert len(load_manifest(path)) == 0


def test_duplicate_id(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(HEADER + "a,x.pgm,h.pgm,1,\na,y.pgm,h2.pgm,0,\n")
    with pytest.raises(DuplicateIdError):
        load_manifest(path)


def test_missing_column(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("id,image,label\na,x.pgm,1\n")
    with pytest.raises(MissingColumnError):
        load_manifest(path)


def test_write_read_roundtrip(tmp_path):
    samples = (
        ImageSample("s1", tmp_path / "i1.pgm", tmp_path / "h1.pgm", 1, tmp_path / "g1.pgm"),
        ImageSample("s2", tmp_path / "i2.pgm", tmp_path / "h2.pgm", 0, None),
    )
    path = tmp_path / "m.csv"
    write_manifest(Manifest(samples), path)
    text = path.read_text()
    assert text.startswith(HEADER)
    assert "\r" not in text
    assert load_manifest(path) == Manifest(samples)
