import pytest

from shipwake.errors import FrameRangeMismatchError, ZeroSPError
from shipwake.evaluation import (EvalCounts, count_frames, format_timing,
                                 timing_report, truncated_percent, vf)


def _box(x, y, w, h, bid=1):
    return {"id": bid, "x": x, "y": y, "w": w, "h": h}


# ---------------------------------------------------------------- vf

def test_vf_published_operating_points():
    cases = [
        (EvalCounts(1150, 8, 0), 1.0 - 4.0 / 1150.0, 0.99652, 99),
        (EvalCounts(1900, 6, 3), 1.0 - 6.0 / 1900.0, 0.99684, 99),
        (EvalCounts(1050, 70, 0), 1.0 - 35.0 / 1050.0, 0.96667, 96),
        (EvalCounts(200, 0, 0), 1.0, 1.00000, 100),
    ]
    for counts, exact, rounded, pct in cases:
        v = vf(counts)
        assert v == pytest.approx(exact, abs=1e-9)
        assert round(v, 5) == rounded
        assert truncated_percent(v) == pct


def test_vf_can_go_negative():
    assert vf(EvalCounts(10, 0, 10)) == pytest.approx(0.0)
    assert vf(EvalCounts(10, 30, 10)) == pytest.approx(-1.5)


def test_vf_rejects_zero_ship_frames():
    with pytest.raises(ZeroSPError):
        vf(EvalCounts(0, 5, 0))


def test_truncated_percent_truncates():
    assert truncated_percent(0.999) == 99
    assert truncated_percent(0.96667) == 96
    assert truncated_percent(1.0) == 100
    assert truncated_percent(0.0) == 0


# ---------------------------------------------------------------- counting

def test_count_perfect_run():
    dets = {f: [_box(10, 10, 5, 5)] for f in range(100)}
    gt = {f: [_box(10, 10, 5, 5)] for f in range(100)}
    assert count_frames(dets, gt) == EvalCounts(100, 0, 0)


def test_count_everything_missed():
    dets = {f: [] for f in range(50)}
    gt = {f: [_box(10, 10, 5, 5)] for f in range(50)}
    assert count_frames(dets, gt) == EvalCounts(50, 0, 50)


def test_count_false_alarm_frame():
    dets = {f: [_box(10, 10, 5, 5)] for f in range(10)}
    gt = {f: [_box(10, 10, 5, 5)] for f in range(10)}
    dets[3] = [_box(10, 10, 5, 5), _box(40, 40, 5, 5)]
    counts = count_frames(dets, gt)
    assert counts == EvalCounts(10, 1, 0)
    assert vf(counts) == pytest.approx(0.95)


def test_count_low_iou_is_both_missed_and_spurious():
    dets = {0: [_box(0, 0, 4, 4)]}
    gt = {0: [_box(20, 20, 4, 4)]}
    assert count_frames(dets, gt) == EvalCounts(1, 1, 1)


def test_count_empty_gt_frame_is_not_sp():
    dets = {0: [], 1: [_box(5, 5, 4, 4)]}
    gt = {0: [], 1: []}
    counts = count_frames(dets, gt)
    assert counts == EvalCounts(0, 1, 0)
    with pytest.raises(ZeroSPError):
        vf(counts)


def test_count_iou_floor_is_inclusive():
    # boxes with IoU exactly 0.5: (0,0,2,4) vs (0,0,4,4) -> 8/16
    dets = {0: [_box(0, 0, 2, 4)]}
    gt = {0: [_box(0, 0, 4, 4)]}
    assert count_frames(dets, gt, iou_min=0.5) == EvalCounts(1, 0, 0)
    assert count_frames(dets, gt, iou_min=0.51) == EvalCounts(1, 1, 1)


def test_count_unknown_frame_raises():
    dets = {0: [], 7: []}
    gt = {0: []}
    with pytest.raises(FrameRangeMismatchError):
        count_frames(dets, gt)


def test_count_only_detection_frames_evaluated():
    dets = {5: [_box(0, 0, 4, 4)]}
    gt = {f: [_box(0, 0, 4, 4)] for f in range(100)}
    assert count_frames(dets, gt) == EvalCounts(1, 0, 0)


def test_count_one_gt_per_detection():
    # two detections over one gt box: the second one is spurious
    dets = {0: [_box(0, 0, 4, 4), _box(1, 0, 4, 4)]}
    gt = {0: [_box(0, 0, 4, 4)]}
    assert count_frames(dets, gt) == EvalCounts(1, 1, 0)


def test_count_accepts_tuples_and_bbox_objects():
    class Boxy:
        def __init__(self, bbox):
            self.bbox = bbox

    dets = {0: [(3, 3, 6, 6)], 1: [Boxy((3, 3, 6, 6))]}
    gt = {0: [_box(3, 3, 6, 6)], 1: [(3, 3, 6, 6)]}
    assert count_frames(dets, gt) == EvalCounts(2, 0, 0)


# ---------------------------------------------------------------- timing

def test_timing_report_grid():
    ns = [i * 1_000_000 for i in range(1, 11)]
    rep = timing_report(ns, dims=(200, 150))
    assert rep["frames"] == 10
    assert rep["mean_ms"] == pytest.approx(5.5)
    assert rep["median_ms"] == pytest.approx(5.5)
    assert rep["max_ms"] == pytest.approx(10.0)
    assert 9.0 <= rep["p95_ms"] <= 10.0
    assert rep["dims"] == "200x150"


def test_timing_report_rejects_empty():
    with pytest.raises(ValueError):
        timing_report([])


def test_format_timing_mentions_every_stat():
    rep = timing_report([2_000_000, 4_000_000], dims=(64, 48))
    text = format_timing(rep)
    assert "64x48" in text
    assert "frames timed: 2" in text
    for stat in ("mean", "median", "p95", "max"):
        assert stat in text
    assert "3.000 ms" in text
