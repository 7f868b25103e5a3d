"""Greedy IoU track association and the first-region feedback mask."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Track:
    id: int
    bbox: tuple  # (x, y, w, h)
    age: int = 0
    missed: int = 0


@dataclass
class TrackerParams:
    iou_match_min: float = 0.3
    max_missed: int = 5
    roi_dilation: int = 8

    def __post_init__(self):
        if not 0 < self.iou_match_min <= 1:
            raise ValueError(f"iou_match_min must be in (0, 1], got {self.iou_match_min}")
        if self.max_missed < 0:
            raise ValueError(f"max_missed must be >= 0, got {self.max_missed}")
        if self.roi_dilation < 0:
            raise ValueError(f"roi_dilation must be >= 0, got {self.roi_dilation}")


def iou(a, b) -> float:
    """Intersection over union of two (x, y, w, h) boxes."""
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    if inter == 0:
        return 0.0
    return inter / (aw * ah + bw * bh - inter)


def associate(tracks, regions, params: TrackerParams, next_id: int = 1):
    """One association step; returns (live tracks, next fresh id).

    Pairs are taken greedily by descending IoU (ties broken by track then
    region order). Matched tracks adopt the region's bbox; unmatched
    regions spawn fresh ids; unmatched tracks coast until they have missed
    more than max_missed frames, then retire. Surviving pre-existing
    tracks age by one.
    """
    tracks = list(tracks)
    regions = list(regions)
    pairs = []
    for ti, t in enumerate(tracks):
        for ri, r in enumerate(regions):
            v = iou(t.bbox, r.bbox)
            if v >= params.iou_match_min:
                pairs.append((-v, ti, ri))
    pairs.sort()

    matched_t: dict[int, int] = {}
    matched_r: set[int] = set()
    for neg, ti, ri in pairs:
        if ti in matched_t or ri in matched_r:
            continue
        matched_t[ti] = ri
        matched_r.add(ri)

    out = []
    for ti, t in enumerate(tracks):
        if ti in matched_t:
            r = regions[matched_t[ti]]
            out.append(Track(t.id, tuple(r.bbox), t.age + 1, 0))
        else:
            if t.missed + 1 > params.max_missed:
                continue  # retired
            out.append(Track(t.id, t.bbox, t.age + 1, t.missed + 1))
    for ri, r in enumerate(regions):
        if ri not in matched_r:
            out.append(Track(next_id, tuple(r.bbox), 0, 0))
            next_id += 1
    return out, next_id


def build_first_region(tracks, dims, params: TrackerParams) -> np.ndarray:
    """Union of track boxes dilated by roi_dilation, clamped to the frame.

    `dims` is (width, height). The mask is the strict-threshold region for
    the next frame's segmentation.
    """
    w, h = dims
    mask = np.zeros((h, w), dtype=bool)
    d = params.roi_dilation
    for t in tracks:
        x, y, bw, bh = t.bbox
        x0 = max(0, x - d)
        y0 = max(0, y - d)
        x1 = min(w, x + bw + d)
        y1 = min(h, y + bh + d)
        if x0 < x1 and y0 < y1:
            mask[y0:y1, x0:x1] = True
    return mask
