"""Frame, mask, and record IO in bit-stable formats.

Inputs: binary PPM (P6), PNG, or a headerless raw RGB24 stream with
dimensions supplied out of band. Outputs: binary PGM (P5) masks with
foreground = 255, PNG annotated frames, newline-delimited JSON detection
records, and plain-text reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, DimensionMismatchError, EmptySequenceError

FRAME_SUFFIXES = (".ppm", ".png")


@dataclass
class Frame:
    index: int
    pixels: np.ndarray  # (h, w, 3) uint8

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _pnm_tokens(data: bytes, path, count: int) -> tuple[list[bytes], int]:
    """First `count` header tokens of a PNM file, honoring # comments.

    Returns (tokens, offset of the first raster byte).
    """
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            raise DecodeError(f"{path}: truncated header")
        tokens.append(data[start:i])
    if i >= n:
        raise DecodeError(f"{path}: missing raster data")
    return tokens, i + 1  # single whitespace byte ends the header


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if not data.startswith(b"P6"):
        raise DecodeError(f"{path}: not a binary PPM (P6)")
    tokens, offset = _pnm_tokens(data, path, 4)
    try:
        w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    except ValueError as exc:
        raise DecodeError(f"{path}: bad PPM header") from exc
    if maxval != 255:
        raise DecodeError(f"{path}: unsupported maxval {maxval}")
    body = data[offset:offset + w * h * 3]
    if len(body) != w * h * 3:
        raise DecodeError(f"{path}: expected {w * h * 3} raster bytes, got {len(body)}")
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3).copy()


def write_ppm(pixels: np.ndarray, path) -> None:
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())


def read_png(path) -> np.ndarray:
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc


def write_png(pixels: np.ndarray, path) -> None:
    Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8), mode="RGB").save(path)


def read_frame_file(path) -> np.ndarray:
    p = Path(path)
    if p.suffix.lower() == ".ppm":
        return read_ppm(p)
    if p.suffix.lower() == ".png":
        return read_png(p)
    raise DecodeError(f"{path}: unsupported frame format")


def write_mask(mask: np.ndarray, path) -> None:
    """Binary PGM (P5), foreground 255, background 0; byte-deterministic."""
    m = np.asarray(mask)
    h, w = m.shape
    body = np.where(m, np.uint8(255), np.uint8(0))
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(body.tobytes())


def read_mask(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise DecodeError(f"{path}: not a binary PGM (P5)")
    tokens, offset = _pnm_tokens(data, path, 4)
    w, h, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise DecodeError(f"{path}: unsupported maxval {maxval}")
    body = data[offset:offset + w * h]
    if len(body) != w * h:
        raise DecodeError(f"{path}: expected {w * h} raster bytes, got {len(body)}")
    return (np.frombuffer(body, dtype=np.uint8).reshape(h, w) > 0).copy()


class SequenceSource:
    """A fixed-dimension frame sequence, iterated in index order."""

    width: int
    height: int
    n_frames: int

    def __len__(self) -> int:
        return self.n_frames

    def __iter__(self):
        raise NotImplementedError


class DirectorySource(SequenceSource):
    def __init__(self, directory):
        d = Path(directory)
        self.paths = sorted(p for p in d.iterdir()
                            if p.suffix.lower() in FRAME_SUFFIXES)
        if not self.paths:
            raise EmptySequenceError(f"{directory}: no frame files (*.ppm, *.png)")
        first = read_frame_file(self.paths[0])
        self.height, self.width = first.shape[:2]
        self.n_frames = len(self.paths)
        self._first = first

    def __iter__(self):
        for i, p in enumerate(self.paths):
            pixels = self._first if i == 0 else read_frame_file(p)
            if pixels.shape[:2] != (self.height, self.width):
                raise DimensionMismatchError(
                    f"frame {i} ({p.name}) is {pixels.shape[1]}x{pixels.shape[0]}, "
                    f"sequence is {self.width}x{self.height}")
            yield Frame(i, pixels)


class RawStreamSource(SequenceSource):
    """Headerless RGB24 stream; dims must be supplied by the caller."""

    def __init__(self, path, width: int, height: int):
        self.path = Path(path)
        if width < 16 or height < 16:
            raise DecodeError(f"{path}: raw stream dims {width}x{height} too small")
        self.width = width
        self.height = height
        frame_bytes = width * height * 3
        size = self.path.stat().st_size
        if size == 0 or size % frame_bytes != 0:
            raise DecodeError(
                f"{path}: size {size} is not a multiple of {frame_bytes} "
                f"({width}x{height} RGB24 frames)")
        self.n_frames = size // frame_bytes

    def __iter__(self):
        frame_bytes = self.width * self.height * 3
        with open(self.path, "rb") as fh:
            for i in range(self.n_frames):
                body = fh.read(frame_bytes)
                yield Frame(i, np.frombuffer(body, dtype=np.uint8)
                            .reshape(self.height, self.width, 3).copy())


def open_sequence(path, width: int | None = None, height: int | None = None) -> SequenceSource:
    """Open a frame directory, or a raw RGB24 file when dims are given."""
    p = Path(path)
    if p.is_dir():
        return DirectorySource(p)
    if not p.exists():
        raise EmptySequenceError(f"{path}: does not exist")
    if width is None or height is None:
        raise DecodeError(f"{path}: raw stream input needs explicit width and height")
    return RawStreamSource(p, width, height)


def _box_record(box) -> dict:
    if isinstance(box, dict):
        return {"id": box["id"], "x": box["x"], "y": box["y"],
                "w": box["w"], "h": box["h"]}
    x, y, w, h = box.bbox
    return {"id": box.id, "x": x, "y": y, "w": w, "h": h}


def write_detections(sink, frame_index: int, boxes) -> None:
    """Append one NDJSON record; boxes serialized in ascending id order."""
    recs = sorted((_box_record(b) for b in boxes), key=lambda r: r["id"])
    record = {"frame": frame_index, "boxes": recs}
    sink.write(json.dumps(record, separators=(",", ":")) + "\n")


def read_detections(path) -> dict[int, list[dict]]:
    """Parse an NDJSON detections or ground-truth file into {frame: boxes}."""
    out: dict[int, list[dict]] = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                frame = int(rec["frame"])
                boxes = rec["boxes"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DecodeError(f"{path}:{lineno}: bad record: {exc}") from exc
            if frame in out:
                raise DecodeError(f"{path}:{lineno}: duplicate frame {frame}")
            out[frame] = boxes
    return out


def annotate(pixels: np.ndarray, boxes, color=(255, 0, 0)) -> np.ndarray:
    """Copy of the frame with 1-pixel box outlines drawn over it."""
    img = np.ascontiguousarray(pixels, dtype=np.uint8).copy()
    h, w = img.shape[:2]
    col = np.asarray(color, dtype=np.uint8)
    for box in boxes:
        r = _box_record(box) if not isinstance(box, tuple) else None
        x, y, bw, bh = (r["x"], r["y"], r["w"], r["h"]) if r else box
        x0, y0 = max(0, x), max(0, y)
        x1, y1 = min(w, x + bw), min(h, y + bh)
        if x0 >= x1 or y0 >= y1:
            continue
        img[y0, x0:x1] = col
        img[y1 - 1, x0:x1] = col
        img[y0:y1, x0] = col
        img[y0:y1, x1 - 1] = col
    return img
