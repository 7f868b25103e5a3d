"""Ship detection and tracking in fixed-camera maritime video."""

from .background import BACKGROUND, FOREGROUND, BackgroundSubtractor, classify_pixel
from .backwash import (BackwashParams, ShipRegion, brightness_distortion,
                       calibrate_gain_band, cancel_backwash, height_prune,
                       photometric_gain)
from .errors import (ConfigError, DecodeError, DimensionMismatchError,
                     EmptySequenceError, FrameRangeMismatchError, SceneSpecError,
                     ShipwakeError, WrongFrameCountError, ZeroSPError)
from .evaluation import (EvalCounts, count_frames, timing_report,
                         truncated_percent, vf)
from .frame_io import (Frame, SequenceSource, annotate, open_sequence,
                       read_detections, read_mask, write_detections, write_mask)
from .labeling import Component, Run, extract_runs, filter_small, label_components
from .mask_ops import close, median3x3
from .pipeline import FrameResult, ShipDetector
from .synth import SceneSpec, ShipSpec, generate
from .tracker import Track, TrackerParams, associate, build_first_region, iou

__version__ = "0.1.0"

__all__ = [
    "BACKGROUND", "FOREGROUND", "BackgroundSubtractor", "classify_pixel",
    "BackwashParams", "ShipRegion", "brightness_distortion",
    "calibrate_gain_band", "cancel_backwash", "height_prune", "photometric_gain",
    "ConfigError", "DecodeError", "DimensionMismatchError", "EmptySequenceError",
    "FrameRangeMismatchError", "SceneSpecError", "ShipwakeError",
    "WrongFrameCountError", "ZeroSPError",
    "EvalCounts", "count_frames", "timing_report", "truncated_percent", "vf",
    "Frame", "SequenceSource", "annotate", "open_sequence", "read_detections",
    "read_mask", "write_detections", "write_mask",
    "Component", "Run", "extract_runs", "filter_small", "label_components",
    "close", "median3x3",
    "FrameResult", "ShipDetector",
    "SceneSpec", "ShipSpec", "generate",
    "Track", "TrackerParams", "associate", "build_first_region", "iou",
    "__version__",
]
