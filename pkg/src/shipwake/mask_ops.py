"""Binary mask cleanup: 3x3 median filtering and morphological closing."""

from __future__ import annotations

import numpy as np

from .validation import check_mask


def median3x3(mask) -> np.ndarray:
    """3x3 median (majority of 9) with edge replication at the borders."""
    m = check_mask(mask)
    p = np.pad(m, 1, mode="edge").astype(np.uint8)
    rows = p[:, :-2] + p[:, 1:-1] + p[:, 2:]
    counts = rows[:-2] + rows[1:-1] + rows[2:]
    return counts >= 5


def _dilate(m: np.ndarray, rad: int) -> np.ndarray:
    # separable max filter: full square structuring element
    a = m.copy()
    for d in range(1, rad + 1):
        a[d:] |= m[:-d]
        a[:-d] |= m[d:]
    out = a.copy()
    for d in range(1, rad + 1):
        out[:, d:] |= a[:, :-d]
        out[:, :-d] |= a[:, d:]
    return out


def _erode(m: np.ndarray, rad: int) -> np.ndarray:
    a = m.copy()
    for d in range(1, rad + 1):
        a[d:] &= m[:-d]
        a[:d] = False
        a[:-d] &= m[d:]
        a[-d:] = False
    out = a.copy()
    for d in range(1, rad + 1):
        out[:, d:] &= a[:, :-d]
        out[:, :d] = False
        out[:, :-d] &= a[:, d:]
        out[:, -d:] = False
    return out


def close(mask, times: int = 1, kernel: int = 3) -> np.ndarray:
    """Morphological closing (dilate then erode), applied `times` times.

    Uses a full `kernel` x `kernel` square element. The mask is embedded in
    a false plane wide enough that every probe of the element reads false
    outside the image, so closing stays extensive and idempotent at the
    borders.
    """
    m = check_mask(mask)
    if times < 1:
        raise ValueError(f"times must be >= 1, got {times}")
    if kernel < 3 or kernel % 2 == 0:
        raise ValueError(f"kernel must be odd and >= 3, got {kernel}")
    rad = kernel // 2
    # intermediate dilations can extend rad per pass; pad covers all of them
    pad = times * rad + rad
    p = np.pad(m, pad, mode="constant", constant_values=False)
    for _ in range(times):
        p = _erode(_dilate(p, rad), rad)
    return p[pad:-pad, pad:-pad]
