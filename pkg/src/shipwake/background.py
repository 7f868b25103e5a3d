"""Sample-based background model with dual-threshold classification.

Each pixel keeps `n_samples` historical RGB values. A pixel is background
when at least `phi_min` stored samples lie within a Euclidean color
distance threshold of its current value; the threshold is `r1` inside the
first region (previously detected ship areas, stricter matching so
ship-like colors go foreground more readily) and `r2` elsewhere.
"""

from __future__ import annotations

import struct

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import _kernels
from .errors import DecodeError, DimensionMismatchError, WrongFrameCountError
from .validation import check_frame, check_mask, check_same_dims

BACKGROUND = 0
FOREGROUND = 1

_SNAPSHOT_MAGIC = b"SWBG0001"


def classify_pixel(samples, value, threshold: float, phi_min: int = 2) -> int:
    """Classify one pixel value against its sample model.

    Returns BACKGROUND iff at least `phi_min` samples have Euclidean RGB
    distance strictly below `threshold`. Counting stops as soon as
    `phi_min` matches are found.
    """
    vr, vg, vb = (int(value[0]), int(value[1]), int(value[2]))
    thr_sq = float(threshold) * float(threshold)
    matches = 0
    for s in np.asarray(samples, dtype=np.int64):
        dr = int(s[0]) - vr
        dg = int(s[1]) - vg
        db = int(s[2]) - vb
        if dr * dr + dg * dg + db * db < thr_sq:
            matches += 1
            if matches >= phi_min:
                return BACKGROUND
    return FOREGROUND


class BackgroundSubtractor(BaseEstimator):
    """Per-pixel sample model with stochastic self and neighbor updates.

    fit() absorbs exactly `n_samples` warm-up frames (sample k of every
    pixel is its value in frame k). segment() classifies a frame without
    touching the model; update() mutates it and must be fed the raw
    segmentation mask of the same frame.
    """

    def __init__(self, n_samples=20, phi_min=2, r1=10.0, r2=20.0,
                 subsample=16, rng_seed=0):
        self.n_samples = n_samples
        self.phi_min = phi_min
        self.r1 = r1
        self.r2 = r2
        self.subsample = subsample
        self.rng_seed = rng_seed

    def _validate_params(self):
        if not 1 <= self.phi_min <= self.n_samples:
            raise ValueError(f"phi_min must be in [1, n_samples], got {self.phi_min}")
        if not 0 < self.r1 <= self.r2:
            raise ValueError(f"need 0 < r1 <= r2, got r1={self.r1} r2={self.r2}")
        if self.subsample < 1:
            raise ValueError(f"subsample must be >= 1, got {self.subsample}")

    def fit(self, frames, y=None):
        self._validate_params()
        frames = list(frames)
        if len(frames) != self.n_samples:
            raise WrongFrameCountError(
                f"model init needs exactly {self.n_samples} frames, got {len(frames)}"
            )
        first = check_frame(frames[0])
        h, w = first.shape[:2]
        self.samples_ = np.empty((h, w, self.n_samples, 3), dtype=np.uint8)
        for k, f in enumerate(frames):
            f = check_frame(f, name=f"frame {k}")
            if f.shape[:2] != (h, w):
                raise DimensionMismatchError(
                    f"frame {k} is {f.shape[1]}x{f.shape[0]}, frame 0 is {w}x{h}"
                )
            self.samples_[:, :, k, :] = f
        self.height_ = h
        self.width_ = w
        self.frames_absorbed_ = self.n_samples
        self.rng_state_ = np.array([np.uint64(self.rng_seed & 0xFFFFFFFFFFFFFFFF)],
                                   dtype=np.uint64)
        return self

    def segment(self, frame, first_region=None) -> np.ndarray:
        """Classify a frame; returns a bool mask, True = foreground."""
        check_is_fitted(self, "samples_")
        frame = check_frame(frame)
        check_same_dims(frame, (self.height_, self.width_))
        if first_region is None:
            region = np.zeros((self.height_, self.width_), dtype=np.uint8)
        else:
            region = check_mask(first_region, shape=(self.height_, self.width_),
                                name="first_region").astype(np.uint8)
        out = _kernels.segment_kernel(
            self.samples_, frame, region,
            float(self.r1) ** 2, float(self.r2) ** 2, self.phi_min,
        )
        return out.astype(bool)

    # sklearn-style alias
    predict = segment

    def update(self, frame, mask) -> None:
        """Absorb a frame into the model where `mask` says background."""
        check_is_fitted(self, "samples_")
        frame = check_frame(frame)
        check_same_dims(frame, (self.height_, self.width_))
        fg = check_mask(mask, shape=(self.height_, self.width_)).astype(np.uint8)
        _kernels.update_kernel(self.samples_, frame, fg, self.subsample,
                               self.rng_state_)

    def background_estimate(self, x: int, y: int) -> np.ndarray:
        """Per-channel median of the samples at (x, y), floored to uint8."""
        check_is_fitted(self, "samples_")
        if not (0 <= x < self.width_ and 0 <= y < self.height_):
            raise IndexError(f"({x}, {y}) outside {self.width_}x{self.height_} model")
        med = np.median(self.samples_[y, x].astype(np.int32), axis=0)
        return np.floor(med).astype(np.uint8)

    def estimate_block(self, x: int, y: int, w: int, h: int) -> np.ndarray:
        """background_estimate over a rectangle, as an (h, w, 3) uint8 array."""
        check_is_fitted(self, "samples_")
        if w <= 0 or h <= 0 or x < 0 or y < 0 or \
                x + w > self.width_ or y + h > self.height_:
            raise IndexError(f"block ({x},{y},{w},{h}) outside model bounds")
        block = self.samples_[y:y + h, x:x + w]
        med = np.median(block, axis=2)
        return np.floor(med).astype(np.uint8)

    def save(self, path) -> None:
        """Write a binary snapshot: magic, dims, RNG state, raw samples."""
        check_is_fitted(self, "samples_")
        with open(path, "wb") as fh:
            fh.write(_SNAPSHOT_MAGIC)
            fh.write(struct.pack("<IIIQ", self.height_, self.width_,
                                 self.n_samples, int(self.rng_state_[0])))
            fh.write(self.samples_.tobytes())

    @classmethod
    def load(cls, path, **params) -> "BackgroundSubtractor":
        with open(path, "rb") as fh:
            magic = fh.read(len(_SNAPSHOT_MAGIC))
            if magic != _SNAPSHOT_MAGIC:
                raise DecodeError(f"{path}: not a model snapshot")
            h, w, n, state = struct.unpack("<IIIQ", fh.read(20))
            body = fh.read(h * w * n * 3)
            if len(body) != h * w * n * 3:
                raise DecodeError(f"{path}: truncated snapshot")
        est = cls(**{**params, "n_samples": n})
        est._validate_params()
        est.samples_ = np.frombuffer(body, dtype=np.uint8).reshape(h, w, n, 3).copy()
        est.height_ = h
        est.width_ = w
        est.frames_absorbed_ = n
        est.rng_state_ = np.array([np.uint64(state)], dtype=np.uint64)
        return est
