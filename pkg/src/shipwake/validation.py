"""Input validation helpers for frames, masks, and estimator state."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError

MIN_DIM = 16


def check_frame(frame, name: str = "frame") -> np.ndarray:
    """Validate an RGB frame: uint8 array of shape (h, w, 3), at least 16x16."""
    arr = np.asarray(frame)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (h, w, 3), got {arr.shape}")
    if arr.dtype != np.uint8:
        raise ValueError(f"{name} must be uint8, got {arr.dtype}")
    h, w = arr.shape[:2]
    if h < MIN_DIM or w < MIN_DIM:
        raise ValueError(f"{name} must be at least {MIN_DIM}x{MIN_DIM}, got {w}x{h}")
    return arr


def check_mask(mask, shape=None, name: str = "mask") -> np.ndarray:
    """Validate a binary mask: bool array of shape (h, w), optionally matching `shape`."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.dtype != np.bool_:
        if arr.dtype == np.uint8:
            arr = arr.astype(bool)
        else:
            raise ValueError(f"{name} must be bool or uint8, got {arr.dtype}")
    if shape is not None and arr.shape != tuple(shape):
        raise DimensionMismatchError(
            f"{name} shape {arr.shape} does not match expected {tuple(shape)}"
        )
    return arr


def check_same_dims(frame: np.ndarray, expected_hw: tuple[int, int], name: str = "frame") -> None:
    if frame.shape[:2] != tuple(expected_hw):
        h, w = expected_hw
        raise DimensionMismatchError(
            f"{name} is {frame.shape[1]}x{frame.shape[0]}, sequence is {w}x{h}"
        )


def check_box(box, frame_w: int, frame_h: int, name: str = "box") -> None:
    x, y, w, h = box
    if w <= 0 or h <= 0 or x < 0 or y < 0 or x + w > frame_w or y + h > frame_h:
        raise ValueError(f"{name} {box} does not fit a {frame_w}x{frame_h} frame")
