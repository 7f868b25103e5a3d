import numpy as np
import pytest

from shipwake.backwash import (BackwashParams, brightness_distortion,
                               calibrate_gain_band, cancel_backwash,
                               height_prune, photometric_gain)
from shipwake.labeling import label_components


def _single_component(mask):
    comps = label_components(mask)
    assert len(comps) == 1
    return comps[0]


# ------------------------------------------------------------ half height

def test_height_prune_keeps_solid_rect():
    m = np.zeros((20, 20), dtype=bool)
    m[2:18, 3:9] = True
    comp = _single_component(m)
    assert (height_prune(comp, m) == m).all()


def test_height_prune_cuts_shallow_columns():
    m = np.zeros((42, 34), dtype=bool)
    m[0:40, 1:11] = True     # hull: 40 tall
    m[10:25, 11:31] = True   # trailing shelf: 15 tall, below the 20 cut
    other = np.zeros_like(m)
    other[0:2, 33:34] = True
    comps = label_components(m | other)
    assert len(comps) == 2
    out = height_prune(comps[0], m | other)
    want = np.zeros_like(m)
    want[0:40, 1:11] = True
    assert (out == (want | other)).all()  # second component untouched


def test_height_prune_column_at_threshold_survives():
    # height 16 box, one column of exactly 8 = 0.5 * 16
    m = np.zeros((20, 12), dtype=bool)
    m[2:18, 2:5] = True
    m[2:10, 5] = True
    comp = _single_component(m)
    assert (height_prune(comp, m) == m).all()


def test_height_prune_two_row_component_unchanged():
    m = np.zeros((6, 6), dtype=bool)
    m[1, 1] = m[2, 2] = True  # bbox height 2, extents 1 each; 1 < 1 is false
    comp = _single_component(m)
    assert (height_prune(comp, m) == m).all()


def test_height_prune_returns_copy():
    m = np.zeros((30, 10), dtype=bool)
    m[0:20, 2:4] = True
    m[8:11, 4:8] = True
    comp = _single_component(m)
    keep = m.copy()
    out = height_prune(comp, m)
    assert (m == keep).all()
    assert out.sum() < m.sum()


# ------------------------------------------------------------ photometry

def test_brightness_distortion_examples():
    assert brightness_distortion((50, 50, 50), (100, 100, 100)) == (0.5, True)
    assert brightness_distortion((80, 90, 70), (80, 90, 70)) == (1.0, True)
    alpha, valid = brightness_distortion((100, 50, 0), (200, 0, 0))
    assert valid and alpha == pytest.approx(0.5)
    assert brightness_distortion((10, 10, 10), (0, 0, 0)) == (0.0, False)


def test_brightness_distortion_scales_linearly():
    rng = np.random.default_rng(61)
    for _ in range(200):
        b = rng.uniform(1.0, 255.0, size=3)
        k = float(rng.uniform(0.1, 3.0))
        alpha, valid = brightness_distortion(k * b, b)
        assert valid
        assert alpha == pytest.approx(k, abs=1e-9)


def test_photometric_gain_examples():
    assert photometric_gain(120.0, 60.0) == pytest.approx(2.0)
    assert photometric_gain(100.0, 100.0) == pytest.approx(1.0)
    assert photometric_gain(50.0, 0.0) == 8.0
    assert photometric_gain(50.0, 0.5, gain_cap=4.0) == 4.0


def test_photometric_gain_reciprocal():
    rng = np.random.default_rng(62)
    for _ in range(200):
        a = float(rng.uniform(1.0, 255.0))
        b = float(rng.uniform(1.0, 255.0))
        assert photometric_gain(a, b) * photometric_gain(b, a) == \
            pytest.approx(1.0, abs=1e-9)


# ------------------------------------------------------------ calibration

def test_calibrate_single_spike():
    params = BackwashParams()
    gains = np.full(100, 1.5)
    lo, hi = calibrate_gain_band(gains, params)
    # 64 bins over [0, 8]: the 1.5 spike fills bin [1.5, 1.625)
    assert lo == pytest.approx(1.5)
    assert hi == pytest.approx(1.625)


def test_calibrate_band_is_contiguous_around_peak():
    params = BackwashParams()
    gains = np.concatenate([np.full(500, 3.05), np.full(400, 1.05)])
    lo, hi = calibrate_gain_band(gains, params)
    assert 2.9 <= lo <= 3.05 <= hi <= 3.2  # the 1.05 mode is not bridged


def test_calibrate_falls_back_when_sparse():
    params = BackwashParams(tp1=0.3, tp2=0.8)
    assert calibrate_gain_band(np.full(31, 5.0), params) == (0.3, 0.8)
    assert calibrate_gain_band(np.array([]), params) == (0.3, 0.8)


def test_params_validation():
    with pytest.raises(ValueError):
        BackwashParams(t1=2.0, t2=1.0)
    with pytest.raises(ValueError):
        BackwashParams(tp1=0.9, tp2=0.4)
    with pytest.raises(ValueError):
        BackwashParams(height_fraction=1.0)
    with pytest.raises(ValueError):
        BackwashParams(gain_band_mode="auto")


# ------------------------------------------------------------ cancel

def _scene(shape, water):
    frame = np.empty(shape + (3,), dtype=np.uint8)
    frame[...] = water
    est = frame.copy()
    return frame, est


def test_cancel_strips_shallow_bright_trail():
    frame, est = _scene((30, 40), (100, 100, 100))
    mask = np.zeros((30, 40), dtype=bool)
    mask[5:21, 5:10] = True     # ship: 16 tall
    frame[5:21, 5:10] = 20
    mask[10:15, 10:20] = True   # trail: 5 tall, bright
    frame[10:15, 10:20] = 140

    comps = label_components(mask)
    cleaned, regions = cancel_backwash(frame, est, comps, mask,
                                       BackwashParams())
    want = np.zeros_like(mask)
    want[5:21, 5:10] = True
    assert (cleaned == want).all()
    assert len(regions) == 1
    assert regions[0].bbox == (5, 5, 5, 16)
    assert regions[0].mask_slice.shape == (16, 5)
    assert regions[0].mask_slice.all()


def test_cancel_distortion_band_removes_tall_foam():
    frame, est = _scene((30, 40), (100, 100, 100))
    mask = np.zeros((30, 40), dtype=bool)
    mask[5:21, 5:10] = True
    frame[5:21, 5:10] = 20
    mask[5:21, 10:13] = True   # full height, so it survives the height cut
    frame[5:21, 10:13] = 140   # distortion 1.4, inside [1.15, 2.5]

    cleaned, regions = cancel_backwash(frame, est, label_components(mask),
                                       mask, BackwashParams())
    assert len(regions) == 1 and regions[0].bbox == (5, 5, 5, 16)
    assert not cleaned[:, 10:].any()


def test_cancel_gain_band_removes_color_shifted_foam():
    # colored so the distortion stays below t1 but the gain lands in band
    frame, est = _scene((22, 12), (200, 50, 50))
    mask = np.zeros((22, 12), dtype=bool)
    mask[2:18, 2:6] = True
    frame[2:18, 2:6] = 10               # ship: gain 10, distortion 0.07
    mask[2:18, 6:9] = True
    frame[2:18, 6:9] = (50, 200, 200)   # distortion 0.67, gain 0.67

    cleaned, regions = cancel_backwash(frame, est, label_components(mask),
                                       mask, BackwashParams())
    assert len(regions) == 1 and regions[0].bbox == (2, 2, 4, 16)
    assert not cleaned[:, 6:].any()


def test_cancel_pure_backwash_component_vanishes():
    frame, est = _scene((16, 16), (100, 100, 100))
    mask = np.zeros((16, 16), dtype=bool)
    for c in range(10):   # staircase: bbox 12 tall, every column 3 deep
        mask[c:c + 3, c + 2] = True
    frame[mask] = 90

    cleaned, regions = cancel_backwash(frame, est, label_components(mask),
                                       mask, BackwashParams())
    assert not cleaned.any()
    assert regions == []


def test_cancel_no_components_is_identity():
    frame, est = _scene((16, 16), (100, 100, 100))
    mask = np.zeros((16, 16), dtype=bool)
    cleaned, regions = cancel_backwash(frame, est, [], mask, BackwashParams())
    assert not cleaned.any() and regions == []
    cleaned[0, 0] = True
    assert not mask[0, 0]  # returned mask is not the input array


def test_cancel_min_area_drops_crumbs():
    frame, est = _scene((20, 20), (100, 100, 100))
    mask = np.zeros((20, 20), dtype=bool)
    mask[2:18, 2:6] = True
    frame[2:18, 2:6] = 20
    mask[2:4, 10] = True      # two stray dark pixels, bbox height 2
    frame[2:4, 10] = 20

    cleaned, regions = cancel_backwash(frame, est, label_components(mask),
                                       mask, BackwashParams(), min_area=15)
    assert len(regions) == 1
    assert regions[0].bbox == (2, 2, 4, 16)
    assert not cleaned[:, 10].any()


def test_cancel_output_subset_of_input():
    rng = np.random.default_rng(63)
    params = BackwashParams()
    for _ in range(200):
        h = int(rng.integers(8, 32))
        w = int(rng.integers(8, 32))
        frame = rng.integers(0, 256, size=(h, w, 3)).astype(np.uint8)
        est = rng.integers(0, 256, size=(h, w, 3)).astype(np.uint8)
        mask = rng.random((h, w)) < 0.4
        comps = label_components(mask)
        cleaned, regions = cancel_backwash(frame, est, comps, mask, params)
        assert not (cleaned & ~mask).any()
        # regions repaint exactly to the cleaned mask
        repaint = np.zeros_like(mask)
        for reg in regions:
            x, y, ww, hh = reg.bbox
            assert reg.mask_slice.shape == (hh, ww)
            assert not (repaint[y:y + hh, x:x + ww] & reg.mask_slice).any()
            repaint[y:y + hh, x:x + ww] |= reg.mask_slice
        assert (repaint == cleaned).all()


def test_cancel_reports_stages_in_order():
    frame, est = _scene((20, 20), (100, 100, 100))
    mask = np.zeros((20, 20), dtype=bool)
    mask[2:18, 2:6] = True
    frame[2:18, 2:6] = 20
    names = []
    cancel_backwash(frame, est, label_components(mask), mask,
                    BackwashParams(),
                    stage_sink=lambda name, m: names.append(name))
    assert names == ["backwash_height", "backwash_distortion", "backwash_gain"]
