"""
Wall-clock benchmark of the walk stage for different start selections.

Only walks plus distribution accumulation are timed; start selection,
image loading and histogramming happen outside the timed region.
"""

from __future__ import annotations

import csv
import json
import os
import platform
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .features import JointDistribution
from .sampling import KSpec, select_starts
from .walk import Rule, WalkConfig, run_batch, walk_outcomes

FIELDS = ["image", "k_spec", "kept_pct", "mu", "rule", "rep", "wall_time_ms", "walks"]
AGG_FIELDS = ["kept_pct", "k_spec", "mu", "median_wall_time_ms", "mean_wall_time_ms", "cells"]


@dataclass(frozen=True)
class BenchRecord:
    image: str
    k_spec: str
    kept_pct: float
    mu: int
    rule: str
    rep: int
    wall_time_ms: float
    walks: int


@dataclass
class BenchSuite:
    records: list[BenchRecord]
    repetitions: int
    environment: str = ""

    def cell_medians(self) -> dict:
        """Median wall time per (image, k_spec, mu, rule) cell."""
        cells = {}
        for r in self.records:
            cells.setdefault((r.image, r.k_spec, r.mu, r.rule), []).append(r.wall_time_ms)
        return {k: statistics.median(v) for k, v in cells.items()}

    def aggregate(self) -> list[dict]:
        """Per (kept_pct, mu): median and mean over images and rules of the cell medians."""
        pct = {r.k_spec: r.kept_pct for r in self.records}
        groups = {}
        for (img, spec, mu, rule), t in self.cell_medians().items():
            groups.setdefault((spec, mu), []).append(t)
        rows = []
        for (spec, mu), times in groups.items():
            rows.append({
                "kept_pct": pct[spec], "k_spec": spec, "mu": mu,
                "median_wall_time_ms": statistics.median(times),
                "mean_wall_time_ms": statistics.fmean(times),
                "cells": len(times),
            })
        rows.sort(key=lambda r: (-r["kept_pct"], r["k_spec"], r["mu"]))
        return rows


def environment_note(threads: int = 1) -> str:
    return (f"{platform.machine()} {platform.processor() or 'cpu'}; "
            f"cores={os.cpu_count()}; threads={threads}; python {platform.python_version()}")


def _timed_batch(image, starts, config, threads):
    if threads <= 1:
        t0 = time.perf_counter()
        run_batch(image, starts, config)
        return (time.perf_counter() - t0) * 1e3
    chunks = np.array_split(starts.codes, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        t0 = time.perf_counter()
        parts = list(pool.map(lambda c: walk_outcomes(image, c, config), chunks))
        JointDistribution.from_outcomes(
            np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts]),
            config.mu, config.rule)
        return (time.perf_counter() - t0) * 1e3


def run_bench(images, specs, mu_list, rules=(Rule.MIN,), repetitions: int = 3,
              warmup: int = 1, threads: int = 1, names=None) -> BenchSuite:
    """Time every (image, spec, mu, rule) cell ``repetitions`` times.

    ``warmup`` untimed runs precede each cell. Within an (image, mu, rule)
    group the specs are timed round-robin per repetition, so slow drift of
    the machine is shared by all specs instead of landing on one of them.
    """
    images = list(images)
    specs = [s if isinstance(s, KSpec) else KSpec.parse(str(s)) for s in specs]
    if not images or not specs or not list(mu_list) or not list(rules):
        raise ValueError("images, specs, mu_list and rules must all be non-empty")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    names = list(names) if names is not None else [f"img{i:03d}" for i in range(len(images))]
    records = []
    for name, image in zip(names, images):
        selections = [select_starts(image, spec) for spec in specs]
        for mu in mu_list:
            for rule in rules:
                config = WalkConfig(int(mu), Rule.parse(rule))
                for starts in selections:
                    for _ in range(warmup):
                        _timed_batch(image, starts, config, threads)
                for rep in range(repetitions):
                    for spec, starts in zip(specs, selections):
                        ms = _timed_batch(image, starts, config, threads)
                        records.append(BenchRecord(name, str(spec), round(starts.kept_pct, 4),
                                                   int(mu), str(config.rule), rep, ms,
                                                   len(starts)))
    return BenchSuite(records, repetitions, environment_note(threads))


def aggregate_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + "_aggregate" + path.suffix)


def emit_report(suite: BenchSuite, path, fmt: str = "csv") -> tuple[Path, Path]:
    """Write raw records and the (kept_pct, mu) aggregate next to each other."""
    if not suite.records:
        raise ValueError("empty benchmark suite")
    path = Path(path)
    agg = aggregate_path(path)
    if fmt == "json":
        with open(path, "w") as fh:
            json.dump({"repetitions": suite.repetitions, "environment": suite.environment,
                       "records": [asdict(r) for r in suite.records]}, fh, indent=1)
        with open(agg, "w") as fh:
            json.dump(suite.aggregate(), fh, indent=1)
        return path, agg
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELDS)
        for r in suite.records:
            w.writerow([r.image, r.k_spec, repr(r.kept_pct), r.mu, r.rule, r.rep,
                        repr(r.wall_time_ms), r.walks])
    with open(agg, "w", newline="") as fh:
        w = csv.DictWriter(fh, AGG_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(suite.aggregate())
    return path, agg


def read_report(path) -> BenchSuite:
    """Inverse of :func:`emit_report` for the raw records (CSV or JSON)."""
    path = Path(path)
    if path.suffix == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        return BenchSuite([BenchRecord(**r) for r in doc["records"]], doc["repetitions"],
                          doc.get("environment", ""))
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    records = [
        BenchRecord(r["image"], r["k_spec"], float(r["kept_pct"]), int(r["mu"]), r["rule"],
                    int(r["rep"]), float(r["wall_time_ms"]), int(r["walks"]))
        for r in rows
    ]
    reps = max((r.rep for r in records), default=-1) + 1
    return BenchSuite(records, reps)
