import io

import numpy as np
import pytest

from shipwake.errors import DecodeError, DimensionMismatchError, EmptySequenceError
from shipwake.frame_io import (DirectorySource, RawStreamSource, annotate,
                               open_sequence, read_detections, read_frame_file,
                               read_mask, read_ppm, write_detections,
                               write_mask, write_png, write_ppm)


def _pixels(h, w, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(h, w, 3)).astype(np.uint8)


# ---------------------------------------------------------------- pnm

def test_ppm_roundtrip(tmp_path):
    px = _pixels(20, 30)
    p = tmp_path / "f.ppm"
    write_ppm(px, p)
    assert (read_ppm(p) == px).all()


def test_ppm_exact_bytes(tmp_path):
    px = np.arange(12, dtype=np.uint8).reshape(2, 2, 3)
    p = tmp_path / "f.ppm"
    write_ppm(px, p)
    assert p.read_bytes() == b"P6\n2 2\n255\n" + bytes(range(12))


def test_ppm_header_comments(tmp_path):
    p = tmp_path / "c.ppm"
    p.write_bytes(b"P6\n# made by hand\n2 1 # dims\n255\n" + bytes(6))
    assert (read_ppm(p) == np.zeros((1, 2, 3), dtype=np.uint8)).all()


def test_ppm_rejects_bad_files(tmp_path):
    p = tmp_path / "bad.ppm"
    p.write_bytes(b"P5\n2 2\n255\n" + bytes(4))
    with pytest.raises(DecodeError):
        read_ppm(p)
    p.write_bytes(b"P6\n2 2\n65535\n" + bytes(24))
    with pytest.raises(DecodeError):
        read_ppm(p)
    p.write_bytes(b"P6\n2 2\n255\n" + bytes(5))  # short raster
    with pytest.raises(DecodeError):
        read_ppm(p)


def test_mask_roundtrip_and_bytes(tmp_path):
    mask = np.array([[True, False], [False, True]])
    p = tmp_path / "m.pgm"
    write_mask(mask, p)
    assert p.read_bytes() == b"P5\n2 2\n255\n" + bytes([255, 0, 0, 255])
    back = read_mask(p)
    assert back.dtype == np.bool_
    assert (back == mask).all()


def test_png_roundtrip(tmp_path):
    px = _pixels(15, 17, seed=3)
    p = tmp_path / "f.png"
    write_png(px, p)
    assert (read_frame_file(p) == px).all()


def test_read_frame_file_unknown_suffix(tmp_path):
    p = tmp_path / "f.bmp"
    p.write_bytes(b"nope")
    with pytest.raises(DecodeError):
        read_frame_file(p)


# ---------------------------------------------------------------- sources

def test_directory_source_sorts_and_indexes(tmp_path):
    order = [2, 0, 1]
    for i in order:
        write_ppm(np.full((16, 16, 3), i, dtype=np.uint8),
                  tmp_path / f"frame_{i:03d}.ppm")
    src = open_sequence(tmp_path)
    assert isinstance(src, DirectorySource)
    assert (src.width, src.height, len(src)) == (16, 16, 3)
    got = [(f.index, int(f.pixels[0, 0, 0])) for f in src]
    assert got == [(0, 0), (1, 1), (2, 2)]


def test_directory_source_rejects_empty(tmp_path):
    (tmp_path / "notes.txt").write_text("not a frame")
    with pytest.raises(EmptySequenceError):
        open_sequence(tmp_path)


def test_directory_source_checks_dimensions(tmp_path):
    write_ppm(np.zeros((16, 16, 3), dtype=np.uint8), tmp_path / "a.ppm")
    write_ppm(np.zeros((16, 18, 3), dtype=np.uint8), tmp_path / "b.ppm")
    src = open_sequence(tmp_path)
    with pytest.raises(DimensionMismatchError, match="b.ppm"):
        list(src)


def test_raw_stream_source(tmp_path):
    frames = [_pixels(16, 20, seed=i) for i in range(3)]
    p = tmp_path / "clip.rgb"
    p.write_bytes(b"".join(f.tobytes() for f in frames))
    src = open_sequence(p, width=20, height=16)
    assert isinstance(src, RawStreamSource)
    assert len(src) == 3
    for f, want in zip(src, frames):
        assert (f.pixels == want).all()


def test_raw_stream_needs_dims_and_alignment(tmp_path):
    p = tmp_path / "clip.rgb"
    p.write_bytes(bytes(16 * 20 * 3))
    with pytest.raises(DecodeError):
        open_sequence(p)
    p.write_bytes(bytes(16 * 20 * 3 + 1))
    with pytest.raises(DecodeError):
        open_sequence(p, width=20, height=16)


def test_open_sequence_missing_path(tmp_path):
    with pytest.raises(EmptySequenceError):
        open_sequence(tmp_path / "nowhere")


# ---------------------------------------------------------------- ndjson

def test_detections_record_format():
    sink = io.StringIO()
    write_detections(sink, 5, [{"id": 1, "x": 10, "y": 20, "w": 30, "h": 15}])
    write_detections(sink, 6, [])
    assert sink.getvalue() == (
        '{"frame":5,"boxes":[{"id":1,"x":10,"y":20,"w":30,"h":15}]}\n'
        '{"frame":6,"boxes":[]}\n')


def test_detections_sorted_by_id():
    sink = io.StringIO()
    write_detections(sink, 0, [{"id": 4, "x": 0, "y": 0, "w": 1, "h": 1},
                               {"id": 2, "x": 5, "y": 0, "w": 1, "h": 1}])
    line = sink.getvalue()
    assert line.index('"id":2') < line.index('"id":4')


def test_detections_roundtrip(tmp_path):
    p = tmp_path / "det.ndjson"
    with open(p, "w") as fh:
        write_detections(fh, 0, [{"id": 1, "x": 1, "y": 2, "w": 3, "h": 4}])
        write_detections(fh, 1, [])
    got = read_detections(p)
    assert got == {0: [{"id": 1, "x": 1, "y": 2, "w": 3, "h": 4}], 1: []}


def test_detections_accepts_track_objects():
    from shipwake.tracker import Track
    sink = io.StringIO()
    write_detections(sink, 9, [Track(3, (7, 8, 9, 10))])
    assert sink.getvalue() == \
        '{"frame":9,"boxes":[{"id":3,"x":7,"y":8,"w":9,"h":10}]}\n'


def test_read_detections_rejects_garbage(tmp_path):
    p = tmp_path / "det.ndjson"
    p.write_text('{"frame":0,"boxes":[]}\nnot json\n')
    with pytest.raises(DecodeError, match=":2"):
        read_detections(p)
    p.write_text('{"frame":0,"boxes":[]}\n{"frame":0,"boxes":[]}\n')
    with pytest.raises(DecodeError, match="duplicate"):
        read_detections(p)
    p.write_text('{"boxes":[]}\n')
    with pytest.raises(DecodeError):
        read_detections(p)


def test_read_detections_skips_blank_lines(tmp_path):
    p = tmp_path / "det.ndjson"
    p.write_text('{"frame":0,"boxes":[]}\n\n{"frame":1,"boxes":[]}\n')
    assert set(read_detections(p)) == {0, 1}


# ---------------------------------------------------------------- annotate

def test_annotate_draws_one_pixel_outline():
    img = np.zeros((20, 20, 3), dtype=np.uint8)
    out = annotate(img, [{"id": 1, "x": 5, "y": 6, "w": 6, "h": 4}])
    red = (out == (255, 0, 0)).all(axis=2)
    assert red[6, 5:11].all() and red[9, 5:11].all()
    assert red[6:10, 5].all() and red[6:10, 10].all()
    assert not red[7:9, 6:10].any()   # interior untouched
    assert not img.any()              # original not modified


def test_annotate_clips_boxes_at_border():
    img = np.zeros((10, 10, 3), dtype=np.uint8)
    out = annotate(img, [(-3, -3, 6, 6)])
    red = (out == (255, 0, 0)).all(axis=2)
    assert red[2, 0:3].all()
    assert red[0:3, 2].all()
    assert not red[3:, :].any() and not red[:, 3:].any()
