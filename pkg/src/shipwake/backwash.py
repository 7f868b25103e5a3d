"""Backwash removal: half-height pruning plus color-band filtering.

A labeled component that contains a ship usually drags its wake along.
Three cuts separate them: columns much shorter than the component's box
are wake; surviving pixels whose brightness distortion against the
background sits in [t1, t2] are foam; pixels whose photometric gain falls
in [tp1, tp2] are foam. What remains is relabeled and reported as ships.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labeling import Component, component_pixels, filter_small, label_components, paint
from .validation import check_mask


@dataclass
class BackwashParams:
    t1: float = 1.15
    t2: float = 2.5
    tp1: float = 0.4
    tp2: float = 0.9
    height_fraction: float = 0.5
    gain_hist_bins: int = 64
    gain_cap: float = 8.0
    gain_band_mode: str = "static"  # "static" or "hist"

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise ValueError(f"need t1 < t2, got {self.t1}, {self.t2}")
        if not self.tp1 < self.tp2:
            raise ValueError(f"need tp1 < tp2, got {self.tp1}, {self.tp2}")
        if not 0 < self.height_fraction < 1:
            raise ValueError(f"height_fraction must be in (0, 1), got {self.height_fraction}")
        if self.gain_hist_bins < 2:
            raise ValueError("gain_hist_bins must be >= 2")
        if self.gain_cap <= 0:
            raise ValueError("gain_cap must be positive")
        if self.gain_band_mode not in ("static", "hist"):
            raise ValueError(f"gain_band_mode must be 'static' or 'hist', got {self.gain_band_mode!r}")


@dataclass
class ShipRegion:
    bbox: tuple  # (x, y, w, h)
    mask_slice: np.ndarray  # bool, shape (h, w) of bbox, this region's pixels only
    track_hint: int | None = None


def height_prune(component: Component, mask, height_fraction: float = 0.5) -> np.ndarray:
    """Clear this component's pixels in columns shorter than the cut.

    A column is cleared when its per-column pixel count is strictly below
    height_fraction * bbox_height; a column exactly at the threshold
    survives. Pixels of other components are never touched. Returns a
    mutated copy.
    """
    m = check_mask(mask).copy()
    x0, y0, w, h = component.bbox
    extent = np.zeros(w, dtype=np.int32)
    for r in component.runs:
        extent[r.col_start - x0:r.col_end - x0 + 1] += 1
    cut = extent < height_fraction * h
    if not cut.any():
        return m
    for r in component.runs:
        seg = cut[r.col_start - x0:r.col_end - x0 + 1]
        m[r.row, r.col_start:r.col_end + 1] &= ~seg
    return m


def brightness_distortion(current, background) -> tuple[float, bool]:
    """Projection coefficient of the current color onto the background color.

    Returns (alpha, valid). alpha = (c . b) / (b . b); 1 means unchanged
    brightness along the background direction. An all-zero background is
    degenerate: (0.0, False), to be excluded from banding.
    """
    c = np.asarray(current, dtype=np.float64)
    b = np.asarray(background, dtype=np.float64)
    den = float(b @ b)
    if den == 0.0:
        return 0.0, False
    return float(c @ b) / den, True


def photometric_gain(background_intensity: float, current_intensity: float,
                     gain_cap: float = 8.0) -> float:
    """Ratio background/current of mean-RGB intensities, capped when dark."""
    if current_intensity < 1.0:
        return gain_cap
    return background_intensity / current_intensity


def calibrate_gain_band(gains, params: BackwashParams) -> tuple[float, float]:
    """Pick the gain band from the histogram's dominant mode.

    With fewer than 32 samples the configured static band is returned.
    Otherwise: histogram over [0, gain_cap], find the peak bin, extend to
    the maximal contiguous range around it where every bin holds at least
    10% of the peak count, and return that range's outer edges.
    """
    gains = np.asarray(gains, dtype=np.float64)
    if gains.size < 32:
        return params.tp1, params.tp2
    counts, edges = np.histogram(gains, bins=params.gain_hist_bins,
                                 range=(0.0, params.gain_cap))
    peak = int(np.argmax(counts))
    floor = 0.1 * counts[peak]
    lo = peak
    while lo > 0 and counts[lo - 1] >= floor:
        lo -= 1
    hi = peak
    while hi < len(counts) - 1 and counts[hi + 1] >= floor:
        hi += 1
    return float(edges[lo]), float(edges[hi + 1])


def _distortion_arrays(cur: np.ndarray, bg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = cur.astype(np.float64)
    b = bg.astype(np.float64)
    den = (b * b).sum(axis=1)
    valid = den > 0.0
    alpha = np.zeros(len(den), dtype=np.float64)
    np.divide((c * b).sum(axis=1), den, out=alpha, where=valid)
    return alpha, valid


def _gain_array(cur: np.ndarray, bg: np.ndarray, gain_cap: float) -> np.ndarray:
    i = cur.astype(np.float64).mean(axis=1)
    b = bg.astype(np.float64).mean(axis=1)
    dark = i < 1.0
    gain = np.full(len(i), gain_cap, dtype=np.float64)
    np.divide(b, i, out=gain, where=~dark)
    return gain


def cancel_backwash(frame, model_estimates, components, mask,
                    params: BackwashParams, min_area: int = 0,
                    connectivity: int = 8, stage_sink=None):
    """Strip wake pixels from each component and relabel the survivors.

    Returns (cleaned mask, list of ShipRegion). The cleaned mask is a
    subset of the input mask; components that vanish entirely (pure
    backwash) yield no region.
    """
    m = check_mask(mask)
    components = list(components)
    if not components:
        return m.copy(), []

    # phase 1: half-height rule, applied per component on a shared copy
    pruned = m.copy()
    per_comp: list[tuple[np.ndarray, np.ndarray]] = []
    for comp in components:
        pruned = height_prune(comp, pruned, params.height_fraction)
        per_comp.append(component_pixels(comp))
    if stage_sink is not None:
        stage_sink("backwash_height", pruned.copy())

    # phase 2: brightness-distortion band on the survivors
    frame = np.asarray(frame)
    est = np.asarray(model_estimates)
    for comp, (ys, xs) in zip(components, per_comp):
        alive = pruned[ys, xs]
        if not alive.any():
            continue
        alpha, valid = _distortion_arrays(frame[ys, xs], est[ys, xs])
        foam = alive & valid & (alpha >= params.t1) & (alpha <= params.t2)
        pruned[ys[foam], xs[foam]] = False
    if stage_sink is not None:
        stage_sink("backwash_distortion", pruned.copy())

    # phase 3: photometric-gain band, calibrated or static
    for comp, (ys, xs) in zip(components, per_comp):
        alive = pruned[ys, xs]
        if not alive.any():
            continue
        gain = _gain_array(frame[ys, xs], est[ys, xs], params.gain_cap)
        if params.gain_band_mode == "hist":
            tp1, tp2 = calibrate_gain_band(gain[alive], params)
        else:
            tp1, tp2 = params.tp1, params.tp2
        foam = alive & (gain >= tp1) & (gain <= tp2)
        pruned[ys[foam], xs[foam]] = False
    if stage_sink is not None:
        stage_sink("backwash_gain", pruned.copy())

    # phases 4+5: relabel what survived, drop the crumbs
    comps = label_components(pruned, connectivity)
    comps = filter_small(comps, min_area)
    cleaned = paint(comps, m.shape)

    regions = []
    for comp in comps:
        x0, y0, w, h = comp.bbox
        sl = np.zeros((h, w), dtype=bool)
        for r in comp.runs:
            sl[r.row - y0, r.col_start - x0:r.col_end - x0 + 1] = True
        regions.append(ShipRegion((x0, y0, w, h), sl))
    return cleaned, regions
