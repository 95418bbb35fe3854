"""Command-line entry point: ``touristwalk {extract,classify,bench,walk,mask}``."""

from __future__ import annotations

import argparse
import os
import sys

from . import bench as bench_mod
from .classify import DEFAULT_SEED, cross_validate, write_confusion, write_cv_report
from .features import (ExtractionConfig, dataset_rows, extract_dataset, read_feature_csv,
                       write_feature_csv)
from .image import DataError, list_images, load_dataset, load_image
from .sampling import KSpec, export_mask
from .walk import Rule, WalkConfig, format_trajectory, run_walk

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4


def parse_mu(text: str) -> tuple[int, ...]:
    """``'0-6'``, ``'1,3,5'`` or mixtures such as ``'0-2,5'``."""
    out = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                a, b = part.split("-", 1)
                lo, hi = int(a), int(b)
                if lo > hi:
                    raise ValueError(f"empty range {part!r}")
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad memory list {text!r}: {exc}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"bad memory list {text!r}")
    return tuple(sorted(out))


def parse_rules(text: str) -> tuple[Rule, ...]:
    try:
        return tuple(sorted({Rule.parse(r) for r in text.split(",") if r.strip()}))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_kspec(text: str) -> KSpec:
    try:
        return KSpec.parse(text)
    except DataError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_kspec_list(values: list[str]) -> list[KSpec]:
    """Each value is one k-spec; ``;`` also separates specs inside a value."""
    specs = []
    for v in values:
        for item in v.split(";"):
            if item.strip():
                specs.append(parse_kspec(item))
    return specs


def parse_start(text: str) -> tuple[int, int]:
    try:
        x, y = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"start must be 'x,y', got {text!r}") from None
    return x, y


def positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="touristwalk",
        description="Deterministic tourist walk texture features with subsampled walk starts.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("extract", help="compute the feature CSV of a class-per-directory dataset")
    e.add_argument("--input", required=True, help="dataset root: <root>/<class>/<sample>.{pgm,png}")
    e.add_argument("--out", required=True, help="feature CSV to write")
    e.add_argument("--k-spec", type=parse_kspec, default=KSpec(),
                   help="start selection: 'all' or comma-separated divisors, e.g. 2,9 (default all)")
    e.add_argument("--mu", type=parse_mu, default=(0, 1, 2, 3, 4, 5, 6),
                   help="memory sizes, e.g. 0-6 or 0,2,4 (default 0-6)")
    e.add_argument("--rules", type=parse_rules, default=(Rule.MIN, Rule.MAX),
                   help="movement rules: min, max or min,max (default min,max)")
    e.add_argument("--m", type=positive_int, default=4, help="histogram bins per memory size (default 4)")
    e.add_argument("--threads", type=positive_int, default=os.cpu_count() or 1,
                   help="worker threads (default: available cores)")

    c = sub.add_parser("classify", help="LDA with stratified k-fold cross-validation")
    c.add_argument("--features", required=True, help="feature CSV from 'extract'")
    c.add_argument("--folds", type=positive_int, default=10, help="number of folds (default 10)")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"shuffle seed (default {DEFAULT_SEED})")
    c.add_argument("--out", help="report CSV: fold,accuracy rows plus overall,ccr")
    c.add_argument("--confusion", help="optional confusion-matrix CSV")

    b = sub.add_parser("bench", help="time the walk stage for several start selections")
    b.add_argument("--input", required=True, help="directory of images")
    b.add_argument("--k-specs", nargs="+", type=str, default=["all", "10", "5", "2", "2,3"],
                   help="one k-spec per value (or ';'-separated), e.g. --k-specs all 10 2 2,3")
    b.add_argument("--mu", type=parse_mu, default=(0, 1, 2, 3, 4, 5, 6), help="memory sizes (default 0-6)")
    b.add_argument("--rules", type=parse_rules, default=(Rule.MIN,), help="movement rules (default min)")
    b.add_argument("--reps", type=positive_int, default=3, help="timed repetitions per cell (default 3)")
    b.add_argument("--warmup", type=int, default=1, help="untimed runs per cell (default 1)")
    b.add_argument("--threads", type=positive_int, default=1, help="threads in the timed region (default 1)")
    b.add_argument("--out", required=True, help="raw records file; the aggregate goes next to it")
    b.add_argument("--json", action="store_true", help="write JSON instead of CSV")

    w = sub.add_parser("walk", help="print one walk step by step")
    w.add_argument("--image", required=True)
    w.add_argument("--start", type=parse_start, required=True, help="row,column")
    w.add_argument("--mu", type=int, required=True)
    w.add_argument("--rule", type=Rule.parse, default=Rule.MIN, help="min or max (default min)")
    w.add_argument("--cap", type=positive_int, default=None, help="step cap (default W*H)")

    m = sub.add_parser("mask", help="write the start-point selection mask as PGM")
    m.add_argument("--image", required=True)
    m.add_argument("--k-spec", type=parse_kspec, required=True)
    m.add_argument("--out", required=True)
    return p


def cmd_extract(args) -> int:
    dataset = load_dataset(args.input)
    config = ExtractionConfig(args.mu, args.rules, args.m, args.k_spec)
    feats = extract_dataset(dataset, config, threads=args.threads)
    write_feature_csv(dataset_rows(dataset, feats), args.out)
    print(f"{len(feats)} samples, {config.dimension} features -> {args.out}")
    return EXIT_OK


def cmd_classify(args) -> int:
    fm = read_feature_csv(args.features)
    report = cross_validate(fm.X, fm.labels, folds=args.folds, seed=args.seed, classes=fm.classes)
    print(report.summary())
    if args.out:
        write_cv_report(report, args.out)
    if args.confusion:
        write_confusion(report, args.confusion)
    return EXIT_OK


def cmd_bench(args) -> int:
    files = list_images(args.input) if os.path.isdir(args.input) else []
    if not files:
        raise DataError(f"{args.input}: no images found")
    images = [load_image(f) for f in files]
    suite = bench_mod.run_bench(images, parse_kspec_list(args.k_specs), args.mu, args.rules,
                                args.reps, args.warmup, args.threads, names=[f.stem for f in files])
    raw, agg = bench_mod.emit_report(suite, args.out, "json" if args.json else "csv")
    print(f"{len(suite.records)} records -> {raw}, aggregate -> {agg}")
    return EXIT_OK


def cmd_walk(args) -> int:
    image = load_image(args.image)
    x, y = args.start
    if not (0 <= x < image.height and 0 <= y < image.width):
        raise DataError(f"start ({x},{y}) outside {image.height}x{image.width} image")
    traj = run_walk(image, (x, y), WalkConfig(args.mu, args.rule, args.cap), keep_path=True)
    sys.stdout.write(format_trajectory(image, traj))
    return EXIT_OK


def cmd_mask(args) -> int:
    export_mask(load_image(args.image), args.k_spec, args.out)
    return EXIT_OK


COMMANDS = {"extract": cmd_extract, "classify": cmd_classify, "bench": cmd_bench,
            "walk": cmd_walk, "mask": cmd_mask}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
