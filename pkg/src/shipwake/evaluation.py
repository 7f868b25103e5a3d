"""Frame-level VF metric and timing statistics.

VF = 1 - (0.5 * ND + SND) / SP, over the evaluated frames: SP counts
frames with at least one ground-truth ship, SND counts ship frames where
no ground-truth box was matched, ND counts frames carrying at least one
spurious (unmatched) detection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameRangeMismatchError, ZeroSPError
from .tracker import iou


@dataclass
class EvalCounts:
    sp: int = 0
    nd: int = 0
    snd: int = 0


def vf(counts: EvalCounts) -> float:
    """Eq-style validation fraction; may go negative when noise dominates."""
    if counts.sp < 1:
        raise ZeroSPError("VF undefined: no evaluated frame contains a ship")
    return 1.0 - (0.5 * counts.nd + counts.snd) / counts.sp


def truncated_percent(value: float) -> int:
    """Percent display with truncation toward zero, not rounding."""
    return int(value * 100.0)


def _as_xywh(box):
    if isinstance(box, dict):
        return (box["x"], box["y"], box["w"], box["h"])
    if hasattr(box, "bbox"):
        return tuple(box.bbox)
    return tuple(box)


def count_frames(detections: dict, truth: dict, iou_min: float = 0.5) -> EvalCounts:
    """Tally SP/ND/SND over the frames present in `detections`.

    Every detection frame must exist in the ground truth. Within a frame,
    detections are matched to ground-truth boxes greedily by descending
    IoU, one ground-truth box per detection; a match needs IoU >= iou_min.
    """
    counts = EvalCounts()
    for fi in sorted(detections):
        if fi not in truth:
            raise FrameRangeMismatchError(f"frame {fi} has detections but no ground truth")
        dets = [_as_xywh(b) for b in detections[fi]]
        gts = [_as_xywh(b) for b in truth[fi]]

        pairs = []
        for di, d in enumerate(dets):
            for gi, g in enumerate(gts):
                v = iou(d, g)
                if v >= iou_min:
                    pairs.append((-v, di, gi))
        pairs.sort()
        used_d: set[int] = set()
        used_g: set[int] = set()
        for neg, di, gi in pairs:
            if di in used_d or gi in used_g:
                continue
            used_d.add(di)
            used_g.add(gi)

        if gts:
            counts.sp += 1
            if not used_g:
                counts.snd += 1
        if len(used_d) < len(dets):
            counts.nd += 1
    return counts


def timing_report(per_frame_ns, dims=None) -> dict:
    """Mean/median/p95/max per-frame latency, reported in milliseconds."""
    arr = np.asarray(list(per_frame_ns), dtype=np.float64)
    if arr.size < 1:
        raise ValueError("timing_report needs at least one sample")
    report = {
        "frames": int(arr.size),
        "mean_ms": float(arr.mean() / 1e6),
        "median_ms": float(np.median(arr) / 1e6),
        "p95_ms": float(np.percentile(arr, 95) / 1e6),
        "max_ms": float(arr.max() / 1e6),
    }
    if dims is not None:
        report["dims"] = f"{dims[0]}x{dims[1]}"
    return report


def format_timing(report: dict) -> str:
    lines = []
    if "dims" in report:
        lines.append(f"frame size: {report['dims']}")
    lines.append(f"frames timed: {report['frames']}")
    for key in ("mean_ms", "median_ms", "p95_ms", "max_ms"):
        lines.append(f"{key[:-3]} latency: {report[key]:.3f} ms")
    return "\n".join(lines)
