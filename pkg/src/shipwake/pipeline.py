"""Per-frame detection pipeline tying all stages together.

Stage order per frame: segment against the model (strict threshold inside
the first region fed back from the previous frame's tracks), update the
model with the raw mask, median filter, closing, run-length labeling,
small-component drop, backwash cancellation, track association, and
finally the next first-region mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .background import BackgroundSubtractor
from .backwash import BackwashParams, ShipRegion, cancel_backwash
from .labeling import filter_small, label_components
from .mask_ops import close, median3x3
from .tracker import Track, TrackerParams, associate, build_first_region

REFERENCE_AREA = 200 * 150  # min_area is quoted at this frame size


@dataclass
class FrameResult:
    index: int
    raw_mask: np.ndarray          # segmentation before cleanup
    morph_mask: np.ndarray        # after median + closing, before backwash
    mask: np.ndarray              # final cleaned mask
    regions: list[ShipRegion]
    tracks: list[Track]           # live tracks after association
    boxes: list[dict] = field(default_factory=list)  # emitted detections


class ShipDetector(BaseEstimator):
    """Full detector: background model, cleanup, backwash, and tracking.

    fit() consumes exactly `n_samples` warm-up frames; process() handles
    one frame and returns a FrameResult. process_all() runs a whole
    sequence, fitting on its head and yielding results for the rest.
    """

    def __init__(self, n_samples=20, phi_min=2, r1=10.0, r2=20.0,
                 subsample=16, rng_seed=0,
                 close_kernel=3, close_times=2,
                 min_area=15, connectivity=8,
                 t1=1.15, t2=2.5, tp1=0.4, tp2=0.9, height_fraction=0.5,
                 gain_hist_bins=64, gain_cap=8.0, gain_band_mode="static",
                 iou_match_min=0.3, max_missed=5, roi_dilation=8):
        self.n_samples = n_samples
        self.phi_min = phi_min
        self.r1 = r1
        self.r2 = r2
        self.subsample = subsample
        self.rng_seed = rng_seed
        self.close_kernel = close_kernel
        self.close_times = close_times
        self.min_area = min_area
        self.connectivity = connectivity
        self.t1 = t1
        self.t2 = t2
        self.tp1 = tp1
        self.tp2 = tp2
        self.height_fraction = height_fraction
        self.gain_hist_bins = gain_hist_bins
        self.gain_cap = gain_cap
        self.gain_band_mode = gain_band_mode
        self.iou_match_min = iou_match_min
        self.max_missed = max_missed
        self.roi_dilation = roi_dilation

    def fit(self, frames, y=None):
        self.subtractor_ = BackgroundSubtractor(
            n_samples=self.n_samples, phi_min=self.phi_min,
            r1=self.r1, r2=self.r2,
            subsample=self.subsample, rng_seed=self.rng_seed)
        self.subtractor_.fit(frames)
        self.backwash_params_ = BackwashParams(
            t1=self.t1, t2=self.t2, tp1=self.tp1, tp2=self.tp2,
            height_fraction=self.height_fraction,
            gain_hist_bins=self.gain_hist_bins, gain_cap=self.gain_cap,
            gain_band_mode=self.gain_band_mode)
        self.tracker_params_ = TrackerParams(
            iou_match_min=self.iou_match_min, max_missed=self.max_missed,
            roi_dilation=self.roi_dilation)
        h, w = self.subtractor_.height_, self.subtractor_.width_
        self.height_ = h
        self.width_ = w
        if self.min_area > 0:
            self.min_area_ = max(1, round(self.min_area * (w * h) / REFERENCE_AREA))
        else:
            self.min_area_ = 0
        self.first_region_ = np.zeros((h, w), dtype=bool)
        self.tracks_: list[Track] = []
        self.next_id_ = 1
        self.frame_index_ = self.n_samples
        self.stage_sink = None  # optional callable(name, mask) for debugging
        return self

    def process(self, frame) -> FrameResult:
        """Run the per-frame loop on one post-warm-up frame."""
        check_is_fitted(self, "subtractor_")
        sink = self.stage_sink
        raw = self.subtractor_.segment(frame, self.first_region_)
        self.subtractor_.update(frame, raw)
        if sink is not None:
            sink("segment", raw.copy())

        m = median3x3(raw)
        if sink is not None:
            sink("median", m.copy())
        m = close(m, times=self.close_times, kernel=self.close_kernel)
        if sink is not None:
            sink("close", m.copy())

        comps = label_components(m, self.connectivity)
        comps = filter_small(comps, self.min_area_)

        estimates = np.zeros((self.height_, self.width_, 3), dtype=np.uint8)
        for comp in comps:
            x, y, w, h = comp.bbox
            estimates[y:y + h, x:x + w] = self.subtractor_.estimate_block(x, y, w, h)

        cleaned, regions = cancel_backwash(
            frame, estimates, comps, m, self.backwash_params_,
            min_area=self.min_area_, connectivity=self.connectivity,
            stage_sink=sink)

        self.tracks_, self.next_id_ = associate(
            self.tracks_, regions, self.tracker_params_, self.next_id_)
        self.first_region_ = build_first_region(
            self.tracks_, (self.width_, self.height_), self.tracker_params_)

        boxes = [{"id": t.id, "x": t.bbox[0], "y": t.bbox[1],
                  "w": t.bbox[2], "h": t.bbox[3]}
                 for t in sorted(self.tracks_, key=lambda t: t.id)
                 if t.missed == 0]
        result = FrameResult(self.frame_index_, raw, m, cleaned, regions,
                             list(self.tracks_), boxes)
        self.frame_index_ += 1
        return result

    def process_all(self, frames):
        """Fit on the first n_samples frames, then yield FrameResults.

        Accepts an iterable of (h, w, 3) arrays or objects with a
        `.pixels` attribute. Sequences no longer than the warm-up yield
        nothing.
        """
        warm = []
        for item in frames:
            pixels = getattr(item, "pixels", item)
            if len(warm) < self.n_samples:
                warm.append(pixels)
                if len(warm) == self.n_samples:
                    self.fit(warm)
                continue
            yield self.process(pixels)
