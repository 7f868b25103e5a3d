"""Synthetic maritime scenes with per-frame ground truth.

Water is a base color plus a drifting sinusoidal brightness wave and
Gaussian noise. Ships are solid rectangles on linear paths; each drags a
flickering foam trail behind it whose strip height stays below half the
ship so the half-height rule has something to cut. Everything is drawn
from one seeded generator, so a spec and seed pin the byte-exact output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SceneSpecError


@dataclass
class ShipSpec:
    size: tuple = (5, 16)            # (w, h) pixels
    color: tuple = (30, 30, 35)
    start: tuple = (20.0, 60.0)      # (x, y) at frame 0
    velocity: tuple = (0.3, 0.0)     # px/frame


@dataclass
class SceneSpec:
    dims: tuple = (200, 150)         # (w, h)
    n_frames: int = 500
    water_base: tuple = (60, 88, 110)
    noise_std: float = 2.0
    wave_amplitude: float = 3.0
    wave_wavelength: float = 40.0
    wave_speed: float = 0.7          # phase drift, px/frame
    ships: list = field(default_factory=lambda: [ShipSpec()])
    trail_length: int = 14
    trail_height_fraction: float = 0.3
    trail_brightness: float = 1.4
    trail_density: float = 0.6
    seed: int = 7


def _ship_pos(ship: ShipSpec, t: int) -> tuple[int, int]:
    return (int(round(ship.start[0] + ship.velocity[0] * t)),
            int(round(ship.start[1] + ship.velocity[1] * t)))


def validate_spec(spec: SceneSpec) -> None:
    w, h = spec.dims
    if w < 16 or h < 16:
        raise SceneSpecError(f"scene dims must be at least 16x16, got {w}x{h}")
    if spec.n_frames < 1:
        raise SceneSpecError("n_frames must be >= 1")
    if not 0 < spec.trail_height_fraction < 0.5:
        raise SceneSpecError(
            f"trail height fraction must be in (0, 0.5), got {spec.trail_height_fraction}")
    if spec.trail_brightness <= 1.0:
        raise SceneSpecError(
            f"trail brightness must exceed 1, got {spec.trail_brightness}")
    if not 0 < spec.trail_density <= 1.0:
        raise SceneSpecError(f"trail density must be in (0, 1], got {spec.trail_density}")
    if spec.noise_std < 0 or spec.wave_amplitude < 0:
        raise SceneSpecError("noise_std and wave_amplitude must be >= 0")
    if spec.wave_wavelength <= 0:
        raise SceneSpecError("wave_wavelength must be positive")
    for i, ship in enumerate(spec.ships):
        sw, sh = ship.size
        if sw < 1 or sh < 1:
            raise SceneSpecError(f"ship {i} has empty size {ship.size}")
        # linear motion: endpoint checks cover the whole path
        for t in (0, spec.n_frames - 1):
            x, y = _ship_pos(ship, t)
            if x < 0 or y < 0 or x + sw > w or y + sh > h:
                raise SceneSpecError(
                    f"ship {i} leaves the frame at t={t}: pos ({x},{y}), size {sw}x{sh}")


def generate(spec: SceneSpec):
    """Render the scene; returns (frames, truth).

    frames: uint8 array (n_frames, h, w, 3). truth: dict frame -> list of
    {"id","x","y","w","h"} boxes covering ship rectangles only.
    """
    validate_spec(spec)
    w, h = spec.dims
    rng = np.random.default_rng(spec.seed)
    base_color = np.asarray(spec.water_base, dtype=np.float64)
    xs = np.arange(w, dtype=np.float64)

    frames = np.empty((spec.n_frames, h, w, 3), dtype=np.uint8)
    truth: dict[int, list[dict]] = {}
    for t in range(spec.n_frames):
        wave = spec.wave_amplitude * np.sin(
            2.0 * np.pi * (xs + spec.wave_speed * t) / spec.wave_wavelength)
        water = base_color[None, None, :] + wave[None, :, None]
        img = water + rng.normal(0.0, spec.noise_std, (h, w, 3))

        boxes = []
        for i, ship in enumerate(spec.ships):
            sw, sh = ship.size
            x, y = _ship_pos(ship, t)

            vx = ship.velocity[0]
            if spec.trail_length > 0 and vx != 0:
                th = max(1, int(round(spec.trail_height_fraction * sh)))
                ty = y + (sh - th) // 2
                if vx > 0:
                    tx0, tx1 = x - spec.trail_length, x
                else:
                    tx0, tx1 = x + sw, x + sw + spec.trail_length
                # draws are full-size so clipping never shifts the stream
                keep = rng.random((th, spec.trail_length)) < spec.trail_density
                foam_noise = rng.normal(0.0, spec.noise_std, (th, spec.trail_length, 3))
                cx0, cx1 = max(0, tx0), min(w, tx1)
                if cx0 < cx1:
                    sel = keep[:, cx0 - tx0:cx1 - tx0]
                    # water has one broadcast row; foam varies only along x
                    foam = water[0:1, cx0:cx1] * spec.trail_brightness \
                        + foam_noise[:, cx0 - tx0:cx1 - tx0]
                    patch = img[ty:ty + th, cx0:cx1]
                    patch[sel] = foam[sel]

            img[y:y + sh, x:x + sw] = np.asarray(ship.color, dtype=np.float64)
            boxes.append({"id": i + 1, "x": x, "y": y, "w": sw, "h": sh})

        frames[t] = np.clip(img, 0.0, 255.0).astype(np.uint8)
        truth[t] = boxes
    return frames, truth
