"""
Walk descriptors: joint (transient, period) distribution, the
trajectory-length histogram and the concatenated feature vector.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .image import DataError, GrayImage, LabeledDataset
from .sampling import ALL, KSpec, select_starts
from .walk import Rule, WalkConfig, walk_outcomes

DEFAULT_MU = (0, 1, 2, 3, 4, 5, 6)
DEFAULT_RULES = (Rule.MIN, Rule.MAX)
DECIMALS = 9


@dataclass(frozen=True)
class JointDistribution:
    """Counts of (tau, rho) pairs; masses are ``count / total``."""

    counts: dict
    total: int
    mu: int
    rule: Rule

    @classmethod
    def from_outcomes(cls, taus, rhos, mu: int, rule) -> "JointDistribution":
        taus = np.asarray(taus, dtype=np.int64)
        rhos = np.asarray(rhos, dtype=np.int64)
        counts = {}
        if taus.size:
            pairs, n = np.unique(np.stack([taus, rhos], axis=1), axis=0, return_counts=True)
            counts = {(int(t), int(r)): int(c) for (t, r), c in zip(pairs, n)}
        return cls(counts, int(taus.size), mu, Rule.parse(rule))

    def merge(self, other: "JointDistribution") -> "JointDistribution":
        if (self.mu, self.rule) != (other.mu, other.rule):
            raise ValueError("cannot merge distributions from different walk configs")
        counts = dict(self.counts)
        for key, c in other.counts.items():
            counts[key] = counts.get(key, 0) + c
        return JointDistribution(counts, self.total + other.total, self.mu, self.rule)

    def mass(self, tau: int, rho: int) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.counts.get((tau, rho), 0), self.total)

    def length_counts(self) -> dict:
        """Number of walks per trajectory length tau+rho, attractor walks only."""
        out = {}
        for (t, r), c in self.counts.items():
            if r >= 1:
                out[t + r] = out.get(t + r, 0) + c
        return out


def histogram(dist: JointDistribution, l: int) -> Fraction:
    """Mass of walks whose transient plus period equals ``l``."""
    if l < 1:
        raise ValueError(f"trajectory length must be >= 1, got {l}")
    if dist.total == 0:
        return Fraction(0)
    hits = sum(dist.counts.get((b, l - b), 0) for b in range(l))
    return Fraction(hits, dist.total)


def feature_slice(dist: JointDistribution, mu: int, m: int = 4) -> list[Fraction]:
    if dist.mu != mu:
        raise ValueError(f"distribution was produced with mu={dist.mu}, not {mu}")
    return [histogram(dist, mu + i) for i in range(1, m + 1)]


@dataclass(frozen=True)
class ExtractionConfig:
    mu_list: tuple[int, ...] = DEFAULT_MU
    rules: tuple[Rule, ...] = DEFAULT_RULES
    m: int = 4
    k_spec: KSpec = ALL

    def __post_init__(self):
        mus = tuple(int(u) for u in self.mu_list)
        if not mus:
            raise ValueError("mu_list must not be empty")
        if list(mus) != sorted(set(mus)) or mus[0] < 0:
            raise ValueError(f"mu_list must be sorted, unique and non-negative: {list(mus)}")
        rules = tuple(sorted({Rule.parse(r) for r in self.rules}))
        if not rules:
            raise ValueError("at least one rule is required")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "mu_list", mus)
        object.__setattr__(self, "rules", rules)

    @property
    def layout(self) -> tuple[tuple[Rule, int, int], ...]:
        return tuple(
            (rule, mu, mu + i)
            for rule in self.rules
            for mu in self.mu_list
            for i in range(1, self.m + 1)
        )

    @property
    def dimension(self) -> int:
        return len(self.rules) * len(self.mu_list) * self.m


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[Fraction, ...]
    layout: tuple[tuple[Rule, int, int], ...] = field(compare=False)

    def __len__(self):
        return len(self.values)

    def to_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def _block(image, codes, mu, rule, m):
    taus, rhos = walk_outcomes(image, codes, WalkConfig(mu, rule))
    dist = JointDistribution.from_outcomes(taus, rhos, mu, rule)
    return feature_slice(dist, mu, m)


def extract(image: GrayImage, config: ExtractionConfig = ExtractionConfig(),
            threads: int = 1) -> FeatureVector:
    """Feature vector of one image: MIN blocks then MAX blocks, ascending mu."""
    codes = select_starts(image, config.k_spec).codes
    jobs = [(rule, mu) for rule in config.rules for mu in config.mu_list]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda job: _block(image, codes, job[1], job[0], config.m), jobs))
    else:
        blocks = [_block(image, codes, mu, rule, config.m) for rule, mu in jobs]
    return FeatureVector(tuple(v for b in blocks for v in b), config.layout)


def extract_dataset(dataset: LabeledDataset, config: ExtractionConfig = ExtractionConfig(),
                    threads: int = 1) -> list[tuple[int, str, FeatureVector]]:
    """Features for every sample; row order follows the dataset."""
    def one(sample):
        return extract(sample[2], config)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vectors = list(pool.map(one, dataset.samples))
    else:
        vectors = [one(s) for s in dataset.samples]
    return [(c, sid, v) for (c, sid, _), v in zip(dataset.samples, vectors)]


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def format_value(v: Fraction, decimals: int = DECIMALS) -> str:
    """Fixed-point decimal, rounded half to even from the exact rational."""
    scaled = round(Fraction(v) * 10 ** decimals)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** decimals)
    return f"{sign}{whole}.{frac:0{decimals}d}"


def write_feature_csv(rows: Iterable[tuple[str, str, Sequence]], path) -> None:
    """Rows are (class name, sample id, values)."""
    rows = list(rows)
    dim = len(rows[0][2]) if rows else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["class", "sample"] + [f"f{i}" for i in range(1, dim + 1)])
        for cls, sid, values in rows:
            if len(values) != dim:
                raise ValueError(f"row {cls}/{sid} has {len(values)} values, expected {dim}")
            writer.writerow([cls, sid] + [format_value(v) for v in values])


def dataset_rows(dataset: LabeledDataset, features) -> list:
    return [(dataset.classes[c], sid, fv.values) for c, sid, fv in features]


@dataclass
class FeatureMatrix:
    classes: list[str]
    labels: np.ndarray
    sample_ids: list[str]
    X: np.ndarray

    @property
    def dimension(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return len(self.labels)


def read_feature_csv(path) -> FeatureMatrix:
    """Parse a feature CSV; classes are indexed in sorted name order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if header[:2] != ["class", "sample"] or len(header) < 3:
            raise DataError(f"{path}:1: expected header 'class,sample,f1..fD'")
        dim = len(header) - 2
        names, ids, rows = [], [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != dim + 2:
                raise DataError(f"{path}:{lineno}: expected {dim + 2} fields, got {len(rec)}")
            try:
                rows.append([float(v) for v in rec[2:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            names.append(rec[0])
            ids.append(rec[1])
    if not rows:
        raise DataError(f"{path}: no data rows")
    classes = sorted(set(names))
    index = {c: i for i, c in enumerate(classes)}
    return FeatureMatrix(classes, np.array([index[n] for n in names]), ids, np.array(rows))
