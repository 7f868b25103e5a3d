"""Compiled per-pixel kernels for segmentation and model update.

The RNG is a splitmix64 stream. Its state lives in a one-element uint64
array owned by the estimator: passing the state as a scalar would let it
round-trip through Python ints, and a Python int re-enters numba as int64,
where the right-shifts in the mixer sign-extend and corrupt the stream.
Array storage pins the dtype so only the uint64 specialization exists.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def _mix(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def segment_kernel(samples, frame, region, r1sq, r2sq, phi_min):
    """Classify each pixel: 1 = foreground. `region` selects the r1 threshold."""
    h, w, n, _ = samples.shape
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            thr = r1sq if region[y, x] else r2sq
            fr = np.int32(frame[y, x, 0])
            fg_ = np.int32(frame[y, x, 1])
            fb = np.int32(frame[y, x, 2])
            matches = 0
            for k in range(n):
                dr = np.int32(samples[y, x, k, 0]) - fr
                dg = np.int32(samples[y, x, k, 1]) - fg_
                db = np.int32(samples[y, x, k, 2]) - fb
                if dr * dr + dg * dg + db * db < thr:
                    matches += 1
                    if matches >= phi_min:
                        break
            if matches < phi_min:
                out[y, x] = 1
    return out


@njit(cache=True)
def update_kernel(samples, frame, fg, subsample, state_arr):
    """Stochastic model update for pixels classified background.

    Per background pixel: with probability 1/subsample replace one random
    own sample with the current value; with an independent 1/subsample
    chance replace one random sample of a uniformly drawn in-bounds
    8-neighbor. For subsample == 16 each mixer output supplies sixteen
    exact 1/16 coins (one per nibble); otherwise one output per coin.
    """
    h, w, n, _ = samples.shape
    sub = np.uint64(subsample)
    nn = np.uint64(n)
    zero = np.uint64(0)
    eight = np.uint64(8)
    low4 = np.uint64(15)
    four = np.uint64(4)
    nibble_mode = subsample == 16
    state = state_arr[0]
    bits = zero
    avail = 0
    for y in range(h):
        for x in range(w):
            if fg[y, x]:
                continue
            for coin in range(2):
                if nibble_mode:
                    if avail == 0:
                        state, bits = _mix(state)
                        avail = 16
                    hit = (bits & low4) == zero
                    bits = bits >> four
                    avail -= 1
                else:
                    state, z = _mix(state)
                    hit = z % sub == zero
                if not hit:
                    continue
                if coin == 0:
                    ty = y
                    tx = x
                else:
                    while True:
                        state, z = _mix(state)
                        d = np.int64(z % eight)
                        if d < 3:
                            ty = y - 1
                            tx = x + d - 1
                        elif d < 5:
                            ty = y
                            tx = x - 1 if d == 3 else x + 1
                        else:
                            ty = y + 1
                            tx = x + d - 6
                        if 0 <= ty < h and 0 <= tx < w:
                            break
                state, z = _mix(state)
                k = np.int64(z % nn)
                samples[ty, tx, k, 0] = frame[y, x, 0]
                samples[ty, tx, k, 1] = frame[y, x, 1]
                samples[ty, tx, k, 2] = frame[y, x, 2]
    state_arr[0] = state
