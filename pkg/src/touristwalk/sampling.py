"""
Start-point selection by pixel-code divisibility.

A pixel is used as a walk origin only if its row-major code is not a
multiple of any divisor in the k-spec. The rule is deterministic and
spreads the kept pixels over the whole image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .image import DataError, GrayImage, PixelCoord, save_pgm

KEPT_VALUE = 255
IGNORED_VALUE = 128


@dataclass(frozen=True)
class KSpec:
    """Divisor set; ``divisors=None`` means every pixel is a start."""

    divisors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.divisors is None:
            return
        divs = tuple(int(k) for k in self.divisors)
        if not divs:
            raise DataError("k-spec needs at least one divisor (use 'all' for every pixel)")
        if any(k < 2 for k in divs):
            raise DataError(f"k-spec divisors must be >= 2, got {list(divs)}")
        if len(set(divs)) != len(divs):
            raise DataError(f"duplicate divisors in k-spec {list(divs)}")
        object.__setattr__(self, "divisors", tuple(sorted(divs)))

    @classmethod
    def parse(cls, text: str) -> "KSpec":
        """``'all'``, ``'2'``, ``'2,9'`` or the bracket form ``'[2 9]'``."""
        t = text.strip().lower()
        if t == "all":
            return ALL
        t = t.strip("[]")
        parts = [p for p in t.replace(",", " ").split() if p]
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise DataError(f"bad k-spec {text!r}: {exc}") from exc

    @property
    def is_all(self) -> bool:
        return self.divisors is None

    def __str__(self):
        return "all" if self.divisors is None else ",".join(map(str, self.divisors))


ALL = KSpec()

# Table of percentages of kept pixels for the specs used in the experiments.
TABLE_SPECS = tuple(
    KSpec(d) for d in [(10,), (7,), (5,), (4,), (3,), (2,), (2, 9), (2, 5), (2, 3)]
)


@dataclass(frozen=True, eq=False)
class StartSelection:
    spec: KSpec
    width: int
    height: int
    codes: np.ndarray  # ascending pixel codes

    @property
    def points(self) -> list[PixelCoord]:
        return [PixelCoord(*divmod(int(c), self.width)) for c in self.codes]

    @property
    def kept_fraction(self) -> Fraction:
        return Fraction(len(self.codes), self.width * self.height)

    @property
    def kept_pct(self) -> float:
        return 100.0 * len(self.codes) / (self.width * self.height)

    def __len__(self):
        return len(self.codes)


def keep_mask(image: GrayImage, spec: KSpec) -> np.ndarray:
    """Boolean (H, W) array, True where the pixel starts a walk."""
    codes = np.arange(image.size, dtype=np.int64).reshape(image.height, image.width)
    mask = np.ones(codes.shape, dtype=bool)
    if not spec.is_all:
        for k in spec.divisors:
            mask &= codes % k != 0
    return mask


def select_starts(image: GrayImage, spec: KSpec) -> StartSelection:
    codes = np.flatnonzero(keep_mask(image, spec)).astype(np.int64)
    codes.setflags(write=False)
    return StartSelection(spec, image.width, image.height, codes)


def fraction_for_spec(spec: KSpec) -> Fraction:
    """Asymptotic kept fraction, by inclusion-exclusion over the divisor set."""
    if spec.is_all:
        return Fraction(1)
    excluded = Fraction(0)
    divs = spec.divisors
    for r in range(1, len(divs) + 1):
        for subset in combinations(divs, r):
            excluded += Fraction((-1) ** (r + 1), math.lcm(*subset))
    return 1 - excluded


def mask_image(image: GrayImage, spec: KSpec) -> np.ndarray:
    return np.where(keep_mask(image, spec), KEPT_VALUE, IGNORED_VALUE).astype(np.uint8)


def export_mask(image: GrayImage, spec: KSpec, path) -> None:
    """Write the selection as a PGM: 255 where kept, 128 where ignored."""
    save_pgm(mask_image(image, spec), path)
