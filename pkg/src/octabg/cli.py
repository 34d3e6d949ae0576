"""Command-line surface: quantize, train, detect, eval, synth, bench."""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from octabg import __version__
from octabg.detect import detect_frame_diff, detect_octree, detect_running_average
from octabg.evaluation import EvalStats, accumulate, emit_report
from octabg.frame_io import (
    FrameSequence,
    load_frame,
    load_mask,
    save_frame,
    save_mask,
    write_frame_sequence,
    write_mask_sequence,
)
from octabg.model import ModelConfig, build_background_model, load_model, save_model
from octabg.octree import pack_codes, quantize_color
from octabg.synth import BoxSpec, SyntheticParams, generate_synthetic


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        rows, cols = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWSxCOLS, got {text!r}")
    if rows < 1 or cols < 1:
        raise argparse.ArgumentTypeError(f"grid dimensions must be >= 1, got {text!r}")
    return rows, cols


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return w, h


def _parse_color(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3 or not all(p.strip().lstrip("-").isdigit() for p in parts):
        raise argparse.ArgumentTypeError(f"expected R,G,B, got {text!r}")
    r, g, b = (int(p) for p in parts)
    if not all(0 <= v <= 255 for v in (r, g, b)):
        raise argparse.ArgumentTypeError(f"channels must be in 0..255, got {text!r}")
    return r, g, b


def _parse_pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y integers, got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octabg",
        description="Octree background modeling: train on a frame sequence, "
        "then label pixels whose quantized color was not frequent during training.",
    )
    parser.add_argument("--version", action="version", version=f"octabg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", help="rewrite an image with each pixel's quantized color")
    p.add_argument("--levels", type=int, default=4,
                   help="color bits kept per channel, 1-8 (default 4)")
    p.add_argument("input", help="input PPM image")
    p.add_argument("output", help="output PPM image")
    p.set_defaults(func=_cmd_quantize)

    p = sub.add_parser("train", help="build a background model from a frame directory")
    p.add_argument("--frames", required=True, help="directory of .ppm frames")
    p.add_argument("--levels", type=int, default=4, help="octree depth, 1-8 (default 4)")
    p.add_argument("--threshold", type=float, default=0.5,
                   help="fraction of trees a color path must appear in (default 0.5, tunable)")
    p.add_argument("--grid", type=_parse_grid, default=(1, 1), metavar="RxC",
                   help="region grid, e.g. 2x2 (default 1x1, tunable)")
    p.add_argument("--group", type=int, default=1,
                   help="frames per tree before merging (default 1, tunable)")
    p.add_argument("--count", type=int, default=100,
                   help="training frames to use (default 100)")
    p.add_argument("-o", "--output", required=True, help="output model file (.bgm)")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("detect", help="write one foreground mask per frame")
    p.add_argument("--model", help="model file from 'train' (required for --method octree)")
    p.add_argument("--frames", required=True, help="directory of .ppm frames")
    p.add_argument("--out", required=True, help="output directory for .pgm masks")
    p.add_argument("--method", choices=("octree", "framediff", "average"), default="octree")
    p.add_argument("--diff-threshold", type=int, default=30,
                   help="per-channel delta for the baselines, 0-255 (default 30)")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("eval", help="score predicted masks against ground truth")
    p.add_argument("--pred", required=True, help="directory of predicted .pgm masks")
    p.add_argument("--truth", required=True, help="directory of ground-truth .pgm masks")
    p.add_argument("--method-name", required=True)
    p.add_argument("--dataset-name", required=True)
    p.add_argument("-o", "--output", required=True, help="output CSV report")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic sequence with ground truth")
    p.add_argument("--scenario", choices=("static", "bimodal_flicker", "moving_box"),
                   required=True)
    p.add_argument("--size", type=_parse_size, default=(160, 120), metavar="WxH")
    p.add_argument("--count", type=int, default=100, help="number of frames (default 100)")
    p.add_argument("--background", type=_parse_color, action="append", metavar="R,G,B",
                   help="background color; give twice for bimodal_flicker")
    p.add_argument("--box-size", type=int, default=12)
    p.add_argument("--box-color", type=_parse_color, default=(200, 0, 0), metavar="R,G,B")
    p.add_argument("--box-start", type=_parse_pair, default=(0, 0), metavar="X,Y")
    p.add_argument("--box-velocity", type=_parse_pair, default=(1, 0), metavar="DX,DY")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True,
                   help="output directory (frames/ and truth/ are created inside)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("bench", help="measure train and detect throughput")
    p.add_argument("--frames", required=True, help="directory of .ppm frames")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--repeat", type=int, default=3, help="timing runs (default 3)")
    p.set_defaults(func=_cmd_bench)

    return parser


def _cmd_quantize(args) -> int:
    if not 1 <= args.levels <= 8:
        raise ValueError(f"levels must be in 1..8, got {args.levels}")
    frame = load_frame(args.input)
    mask = np.uint8((0xFF << (8 - args.levels)) & 0xFF)
    save_frame(args.output, frame & mask)
    return 0


def _cmd_train(args) -> int:
    rows, cols = args.grid
    config = ModelConfig(
        levels=args.levels, threshold=args.threshold, grid_rows=rows, grid_cols=cols,
        group_size=args.group, training_frames=args.count,
    )
    sequence = FrameSequence.scan(args.frames)
    frames = []
    for _, frame in sequence.items():
        frames.append(frame)
        if len(frames) >= config.training_frames:
            break
    model = build_background_model(frames, config)
    save_model(args.output, model)
    for r in range(rows):
        for c in range(cols):
            print(f"region {r},{c}: {len(model.trees[r][c].leaf_codes())} leaf colors")
    return 0


def _cmd_detect(args) -> int:
    if not 0 <= args.diff_threshold <= 255:
        raise ValueError(f"diff-threshold must be in 0..255, got {args.diff_threshold}")
    sequence = FrameSequence.scan(args.frames)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.method == "octree":
        if not args.model:
            raise ValueError("method octree requires --model")
        model = load_model(args.model)
        for name, frame in sequence.items():
            try:
                mask = detect_octree(model, frame)
            except ValueError as exc:
                raise ValueError(f"frame {name}: {exc}")
            save_mask(out_dir / (Path(name).stem + ".pgm"), mask)
    elif args.method == "framediff":
        previous = None
        for name, frame in sequence.items():
            if previous is None:
                mask = np.zeros(frame.shape[:2], dtype=bool)
            else:
                mask = detect_frame_diff(previous, frame, args.diff_threshold)
            previous = frame
            save_mask(out_dir / (Path(name).stem + ".pgm"), mask)
    else:
        average = None
        seen = 0
        for name, frame in sequence.items():
            if average is None:
                average = frame.astype(np.float64)
                seen = 1
                mask = np.zeros(frame.shape[:2], dtype=bool)
            else:
                mask, average = detect_running_average(seen, average, frame,
                                                       args.diff_threshold)
                seen += 1
            save_mask(out_dir / (Path(name).stem + ".pgm"), mask)
    return 0


def _cmd_eval(args) -> int:
    pred_dir, truth_dir = Path(args.pred), Path(args.truth)
    pred_names = sorted(p.name for p in pred_dir.glob("*.pgm"))
    truth_names = sorted(p.name for p in truth_dir.glob("*.pgm"))
    if pred_names != truth_names:
        only_pred = sorted(set(pred_names) - set(truth_names))
        only_truth = sorted(set(truth_names) - set(pred_names))
        raise ValueError(
            f"unmatched mask files; only in {pred_dir}: {only_pred}; "
            f"only in {truth_dir}: {only_truth}"
        )
    if not pred_names:
        raise ValueError(f"no .pgm masks in {pred_dir}")
    stats = EvalStats()
    for name in pred_names:
        predicted = load_mask(pred_dir / name)
        truth = load_mask(truth_dir / name)
        if predicted.shape != truth.shape:
            raise ValueError(
                f"mask {name}: predicted {predicted.shape} vs truth {truth.shape}"
            )
        stats = accumulate(predicted, truth, stats)
    report = emit_report([(args.method_name, args.dataset_name, stats)])
    Path(args.output).write_text(report)
    print(report.splitlines()[1])
    return 0


def _cmd_synth(args) -> int:
    backgrounds = args.background
    if not backgrounds:
        backgrounds = [(0, 100, 0), (0, 160, 0)] if args.scenario == "bimodal_flicker" \
            else [(64, 128, 64)]
    box = None
    if args.scenario == "moving_box":
        box = BoxSpec(size=args.box_size, color=args.box_color,
                      start=args.box_start, velocity=args.box_velocity)
    params = SyntheticParams(
        width=args.size[0], height=args.size[1], frame_count=args.count,
        background_colors=tuple(backgrounds), box=box, seed=args.seed,
    )
    frames, masks = generate_synthetic(args.scenario, params)
    out = Path(args.out)
    sequence = write_frame_sequence(out / "frames", frames)
    write_mask_sequence(out / "truth", masks, sequence.names)
    print(f"wrote {len(frames)} frames to {out / 'frames'} and masks to {out / 'truth'}")
    return 0


def _cmd_bench(args) -> int:
    if args.repeat < 1:
        raise ValueError(f"repeat must be >= 1, got {args.repeat}")
    sequence = FrameSequence.scan(args.frames)
    frames = sequence.load_all()
    pixels = len(frames) * sequence.width * sequence.height
    config = ModelConfig(levels=args.levels, training_frames=len(frames))

    train_rates, detect_rates = [], []
    model = None
    for _ in range(args.repeat):
        start = time.perf_counter()
        model = build_background_model(frames, config)
        train_rates.append(pixels / (time.perf_counter() - start))
        start = time.perf_counter()
        for frame in frames:
            detect_octree(model, frame)
        detect_rates.append(pixels / (time.perf_counter() - start))

    train_rate = statistics.median(train_rates)
    detect_rate = statistics.median(detect_rates)
    print(f"train: {train_rate:.0f} px/s (median of {args.repeat} runs)")
    print(f"detect: {detect_rate:.0f} px/s (median of {args.repeat} runs)")
    if train_rate < 1e6:
        print(f"warning: train throughput {train_rate:.0f} px/s is below 1000000 px/s",
              file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
