"""Flat key=value configuration with dotted sections, mirrored as CLI flags.

Precedence, lowest to highest: built-in defaults, config file, the
SHIPWAKE_SEED environment variable (seed only), command-line flags.
Unknown keys are rejected by name.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import ConfigError

_UNSET = object()


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# key -> (type, default); None defaults are optional values
SCHEMA: dict[str, tuple] = {
    "model.n_samples": (int, 20),
    "model.phi_min": (int, 2),
    "model.r1": (float, 10.0),
    "model.r2": (float, 20.0),
    "model.subsample": (int, 16),
    "model.rng_seed": (int, 0),
    "mask.close_kernel": (int, 3),
    "mask.close_times": (int, 2),
    "label.min_area": (int, 15),
    "label.connectivity": (int, 8),
    "backwash.t1": (float, 1.15),
    "backwash.t2": (float, 2.5),
    "backwash.tp1": (float, 0.4),
    "backwash.tp2": (float, 0.9),
    "backwash.height_fraction": (float, 0.5),
    "backwash.gain_hist_bins": (int, 64),
    "backwash.gain_cap": (float, 8.0),
    "backwash.gain_band_mode": (str, "static"),
    "tracker.iou_match_min": (float, 0.3),
    "tracker.max_missed": (int, 5),
    "tracker.roi_dilation": (int, 8),
    "eval.iou_min": (float, 0.5),
    "io.input": (str, None),
    "io.output_dir": (str, "shipwake_out"),
    "io.detections": (str, None),
    "io.gt": (str, None),
    "io.timings": (str, None),
    "io.width": (int, None),
    "io.height": (int, None),
    "io.annotate": (bool, False),
    "io.dump_stages": (bool, False),
    "synth.width": (int, 200),
    "synth.height": (int, 150),
    "synth.frames": (int, 500),
    "synth.seed": (int, 7),
    "synth.water_r": (int, 60),
    "synth.water_g": (int, 88),
    "synth.water_b": (int, 110),
    "synth.noise_std": (float, 2.0),
    "synth.wave_amplitude": (float, 3.0),
    "synth.wave_wavelength": (float, 40.0),
    "synth.wave_speed": (float, 0.7),
    "synth.ship_w": (int, 5),
    "synth.ship_h": (int, 16),
    "synth.ship_x": (float, 20.0),
    "synth.ship_y": (float, 60.0),
    "synth.ship_vx": (float, 0.3),
    "synth.ship_vy": (float, 0.0),
    "synth.ship_r": (int, 30),
    "synth.ship_g": (int, 30),
    "synth.ship_b": (int, 35),
    "synth.trail_length": (int, 14),
    "synth.trail_fraction": (float, 0.3),
    "synth.trail_brightness": (float, 1.4),
    "synth.trail_density": (float, 0.6),
    "synth.out": (str, "synth_out"),
    "bench.warm_skip": (int, 10),
}


def defaults() -> dict:
    return {key: default for key, (_, default) in SCHEMA.items()}


def _coerce(key: str, raw: str):
    typ = SCHEMA[key][0]
    try:
        if typ is bool:
            return _parse_bool(raw)
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc


def parse_file(path) -> dict:
    """Read `key = value` lines; blank lines and # comments are skipped."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    out: dict = {}
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in SCHEMA:
            raise ConfigError(f"{path}:{lineno}: unknown config key: {key}")
        out[key] = _coerce(key, raw.strip())
    return out


def add_schema_flags(parser) -> None:
    for key, (typ, _) in SCHEMA.items():
        kwargs = {"dest": key, "default": _UNSET, "metavar": "V"}
        if typ is bool:
            kwargs["type"] = _parse_bool
        else:
            kwargs["type"] = typ
        parser.add_argument(f"--{key}", **kwargs)


def resolve(namespace, environ=None) -> dict:
    """Merge defaults, config file, env seed, and CLI flags; validate."""
    environ = os.environ if environ is None else environ
    cfg = defaults()
    config_path = getattr(namespace, "config", None)
    if config_path:
        cfg.update(parse_file(config_path))
    seed_env = environ.get("SHIPWAKE_SEED")
    if seed_env is not None:
        try:
            cfg["model.rng_seed"] = int(seed_env)
        except ValueError as exc:
            raise ConfigError(f"SHIPWAKE_SEED must be an integer, got {seed_env!r}") from exc
    ns = vars(namespace)
    for key in SCHEMA:
        value = ns.get(key, _UNSET)
        if value is not _UNSET:
            cfg[key] = value
    if ns.get("dump_stages"):
        cfg["io.dump_stages"] = True
    validate(cfg)
    return cfg


def validate(cfg: dict) -> None:
    def bad(msg):
        raise ConfigError(msg)

    if not 1 <= cfg["model.phi_min"] <= cfg["model.n_samples"]:
        bad("model.phi_min must be in [1, model.n_samples]")
    if not 0 < cfg["model.r1"] <= cfg["model.r2"]:
        bad("need 0 < model.r1 <= model.r2")
    if cfg["model.subsample"] < 1:
        bad("model.subsample must be >= 1")
    if cfg["mask.close_kernel"] < 3 or cfg["mask.close_kernel"] % 2 == 0:
        bad("mask.close_kernel must be odd and >= 3")
    if cfg["mask.close_times"] < 1:
        bad("mask.close_times must be >= 1")
    if cfg["label.min_area"] < 0:
        bad("label.min_area must be >= 0")
    if cfg["label.connectivity"] not in (4, 8):
        bad("label.connectivity must be 4 or 8")
    if not cfg["backwash.t1"] < cfg["backwash.t2"]:
        bad("need backwash.t1 < backwash.t2")
    if not cfg["backwash.tp1"] < cfg["backwash.tp2"]:
        bad("need backwash.tp1 < backwash.tp2")
    if not 0 < cfg["backwash.height_fraction"] < 1:
        bad("backwash.height_fraction must be in (0, 1)")
    if cfg["backwash.gain_hist_bins"] < 2:
        bad("backwash.gain_hist_bins must be >= 2")
    if cfg["backwash.gain_cap"] <= 0:
        bad("backwash.gain_cap must be positive")
    if cfg["backwash.gain_band_mode"] not in ("static", "hist"):
        bad("backwash.gain_band_mode must be 'static' or 'hist'")
    if not 0 < cfg["tracker.iou_match_min"] <= 1:
        bad("tracker.iou_match_min must be in (0, 1]")
    if cfg["tracker.max_missed"] < 0:
        bad("tracker.max_missed must be >= 0")
    if cfg["tracker.roi_dilation"] < 0:
        bad("tracker.roi_dilation must be >= 0")
    if not 0 < cfg["eval.iou_min"] <= 1:
        bad("eval.iou_min must be in (0, 1]")


def detector_kwargs(cfg: dict) -> dict:
    """Constructor arguments for ShipDetector from a resolved config."""
    return {
        "n_samples": cfg["model.n_samples"],
        "phi_min": cfg["model.phi_min"],
        "r1": cfg["model.r1"],
        "r2": cfg["model.r2"],
        "subsample": cfg["model.subsample"],
        "rng_seed": cfg["model.rng_seed"],
        "close_kernel": cfg["mask.close_kernel"],
        "close_times": cfg["mask.close_times"],
        "min_area": cfg["label.min_area"],
        "connectivity": cfg["label.connectivity"],
        "t1": cfg["backwash.t1"],
        "t2": cfg["backwash.t2"],
        "tp1": cfg["backwash.tp1"],
        "tp2": cfg["backwash.tp2"],
        "height_fraction": cfg["backwash.height_fraction"],
        "gain_hist_bins": cfg["backwash.gain_hist_bins"],
        "gain_cap": cfg["backwash.gain_cap"],
        "gain_band_mode": cfg["backwash.gain_band_mode"],
        "iou_match_min": cfg["tracker.iou_match_min"],
        "max_missed": cfg["tracker.max_missed"],
        "roi_dilation": cfg["tracker.roi_dilation"],
    }


def scene_from_config(cfg: dict):
    from .synth import SceneSpec, ShipSpec

    return SceneSpec(
        dims=(cfg["synth.width"], cfg["synth.height"]),
        n_frames=cfg["synth.frames"],
        water_base=(cfg["synth.water_r"], cfg["synth.water_g"], cfg["synth.water_b"]),
        noise_std=cfg["synth.noise_std"],
        wave_amplitude=cfg["synth.wave_amplitude"],
        wave_wavelength=cfg["synth.wave_wavelength"],
        wave_speed=cfg["synth.wave_speed"],
        ships=[ShipSpec(
            size=(cfg["synth.ship_w"], cfg["synth.ship_h"]),
            color=(cfg["synth.ship_r"], cfg["synth.ship_g"], cfg["synth.ship_b"]),
            start=(cfg["synth.ship_x"], cfg["synth.ship_y"]),
            velocity=(cfg["synth.ship_vx"], cfg["synth.ship_vy"]),
        )],
        trail_length=cfg["synth.trail_length"],
        trail_height_fraction=cfg["synth.trail_fraction"],
        trail_brightness=cfg["synth.trail_brightness"],
        trail_density=cfg["synth.trail_density"],
        seed=cfg["synth.seed"],
    )
