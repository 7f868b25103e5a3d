"""Command-line entry points: detect, eval, synth, bench."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import config as config_mod
from .errors import ConfigError, SceneSpecError, ShipwakeError
from .evaluation import count_frames, format_timing, timing_report, truncated_percent, vf
from .frame_io import (annotate, open_sequence, read_detections, write_detections,
                       write_mask, write_png, write_ppm)
from .pipeline import ShipDetector
from .synth import generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shipwake",
        description="Ship detection and tracking in fixed-camera maritime video")
    sub = parser.add_subparsers(dest="command")
    for name, func, desc in (
            ("detect", run_detect, "run the detection pipeline over a sequence"),
            ("eval", run_eval, "score detections against ground truth (VF metric)"),
            ("synth", run_synth, "generate a synthetic scene with ground truth"),
            ("bench", run_bench, "measure per-frame latency without writing outputs")):
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", metavar="FILE", help="key=value config file")
        p.add_argument("--dump-stages", action="store_true",
                       help="write per-stage debug masks")
        config_mod.add_schema_flags(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "func", None) is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        cfg = config_mod.resolve(args)
        return args.func(cfg)
    except (ConfigError, SceneSpecError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ShipwakeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _require(cfg: dict, key: str, command: str) -> str:
    value = cfg.get(key)
    if not value:
        raise ConfigError(f"{key} is required for '{command}'")
    return value


def _write_report(out_dir: Path, payload: dict, lines: list) -> None:
    (out_dir / "report.txt").write_text("\n".join(lines) + "\n")
    (out_dir / "report.json").write_text(json.dumps(payload, indent=2) + "\n")


def _config_echo(cfg: dict) -> list:
    return [f"{key}={cfg[key]}" for key in sorted(cfg) if cfg[key] is not None]


def run_detect(cfg: dict) -> int:
    stage = "open input"
    try:
        src = open_sequence(_require(cfg, "io.input", "detect"),
                            width=cfg["io.width"], height=cfg["io.height"])
        out_dir = Path(cfg["io.output_dir"])
        masks_dir = out_dir / "masks"
        masks_dir.mkdir(parents=True, exist_ok=True)
        ann_dir = out_dir / "annotated"
        if cfg["io.annotate"]:
            ann_dir.mkdir(exist_ok=True)
        stages_dir = out_dir / "stages"
        if cfg["io.dump_stages"]:
            stages_dir.mkdir(exist_ok=True)

        stage = "model init"
        det = ShipDetector(**config_mod.detector_kwargs(cfg))
        det_path = cfg["io.detections"] or str(out_dir / "detections.ndjson")

        stage = "frame loop"
        timings: list[int] = []
        processed = 0
        warm: list = []
        with open(det_path, "w", encoding="ascii") as det_fh:
            for frame in src:
                if len(warm) < det.n_samples:
                    warm.append(frame.pixels)
                    if len(warm) == det.n_samples:
                        det.fit(warm)
                    continue
                if cfg["io.dump_stages"]:
                    idx = det.frame_index_
                    det.stage_sink = lambda name, m, idx=idx: write_mask(
                        m, stages_dir / f"frame_{idx:06d}_{name}.pgm")
                t0 = time.perf_counter_ns()
                res = det.process(frame.pixels)
                timings.append(time.perf_counter_ns() - t0)
                write_mask(res.mask, masks_dir / f"frame_{res.index:06d}.pgm")
                write_detections(det_fh, res.index, res.boxes)
                if cfg["io.annotate"]:
                    write_png(annotate(frame.pixels, res.boxes),
                              ann_dir / f"frame_{res.index:06d}.png")
                processed += 1

        stage = "write report"
        (out_dir / "timings_ns.txt").write_text(
            "".join(f"{t}\n" for t in timings))
        payload = {
            "command": "detect",
            "frames_processed": processed,
            "rng_seed": cfg["model.rng_seed"],
            "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        }
        lines = [f"frames processed: {processed}",
                 f"rng seed: {cfg['model.rng_seed']}"]
        if timings:
            rep = timing_report(timings, dims=(src.width, src.height))
            payload["timing"] = rep
            lines += ["", format_timing(rep)]
        lines += ["", "config:"] + _config_echo(cfg)
        _write_report(out_dir, payload, lines)
    except (ShipwakeError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        print(f"detect failed during {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


def run_eval(cfg: dict) -> int:
    stage = "read records"
    try:
        det_path = cfg["io.detections"] or str(Path(cfg["io.output_dir"]) / "detections.ndjson")
        gt_path = _require(cfg, "io.gt", "eval")
        detections = read_detections(det_path)
        truth = read_detections(gt_path)

        stage = "count frames"
        counts = count_frames(detections, truth, cfg["eval.iou_min"])
        value = vf(counts)

        stage = "write report"
        out_dir = Path(cfg["io.output_dir"])
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "command": "eval",
            "sp": counts.sp, "nd": counts.nd, "snd": counts.snd,
            "vf": round(value, 4),
            "vf_percent_truncated": truncated_percent(value),
            "rng_seed": cfg["model.rng_seed"],
            "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        }
        lines = [
            f"SP: {counts.sp}",
            f"ND: {counts.nd}",
            f"SND: {counts.snd}",
            f"VF: {value:.4f}",
            f"VF (truncated percent): {truncated_percent(value)}%",
            f"rng seed: {cfg['model.rng_seed']}",
        ]
        timings_path = cfg["io.timings"] or str(out_dir / "timings_ns.txt")
        if Path(timings_path).exists():
            samples = [int(s) for s in Path(timings_path).read_text().split()]
            if samples:
                rep = timing_report(samples)
                payload["timing"] = rep
                lines += ["", format_timing(rep)]
        lines += ["", "config:"] + _config_echo(cfg)
        _write_report(out_dir, payload, lines)
        print("\n".join(lines[:5]))
    except (ShipwakeError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        print(f"eval failed during {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


def run_synth(cfg: dict) -> int:
    stage = "generate"
    try:
        spec = config_mod.scene_from_config(cfg)
        frames, truth = generate(spec)

        stage = "write frames"
        out_dir = Path(cfg["synth.out"])
        out_dir.mkdir(parents=True, exist_ok=True)
        for t in range(frames.shape[0]):
            write_ppm(frames[t], out_dir / f"f{t:05d}.ppm")
        with open(out_dir / "gt.ndjson", "w", encoding="ascii") as fh:
            for t in range(frames.shape[0]):
                write_detections(fh, t, truth[t])
        print(f"wrote {frames.shape[0]} frames and gt.ndjson to {out_dir}")
    except SceneSpecError:
        raise
    except (ShipwakeError, OSError) as exc:
        print(f"synth failed during {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


def run_bench(cfg: dict) -> int:
    stage = "open input"
    try:
        src = open_sequence(_require(cfg, "io.input", "bench"),
                            width=cfg["io.width"], height=cfg["io.height"])
        stage = "model init"
        det = ShipDetector(**config_mod.detector_kwargs(cfg))

        stage = "frame loop"
        timings: list[int] = []
        warm: list = []
        for frame in src:
            if len(warm) < det.n_samples:
                warm.append(frame.pixels)
                if len(warm) == det.n_samples:
                    det.fit(warm)
                continue
            t0 = time.perf_counter_ns()
            det.process(frame.pixels)
            timings.append(time.perf_counter_ns() - t0)

        if not timings:
            print("bench: sequence has no post-warm-up frames", file=sys.stderr)
            return 1
        skip = min(cfg["bench.warm_skip"], max(0, len(timings) - 1))
        rep = timing_report(timings[skip:], dims=(src.width, src.height))
        print(format_timing(rep))
        if skip:
            print(f"(first {skip} frames excluded as JIT/cache warm-up)")
    except (ShipwakeError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        print(f"bench failed during {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
