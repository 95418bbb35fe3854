"""Seeded synthetic texture classes built from filtered Gaussian noise."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .image import GrayImage, LabeledDataset, save_pgm


@dataclass(frozen=True)
class TextureClass:
    name: str
    sigma: tuple[float, float]  # smoothing along rows, columns
    angle: float = 0.0  # degrees
    contrast: float = 40.0  # intensity std before clipping
    stripe_period: float = 0.0  # 0: no periodic component
    stripe_amp: float = 0.0

    def sample(self, size: int, rng: np.random.Generator) -> GrayImage:
        pad = int(4 * max(self.sigma)) + 4
        big = size + 2 * pad
        field = ndimage.gaussian_filter(rng.standard_normal((big, big)), self.sigma, mode="wrap")
        if self.angle:
            field = ndimage.rotate(field, self.angle, reshape=False, order=1, mode="reflect")
        field = field[pad:pad + size, pad:pad + size]
        field = (field - field.mean()) / (field.std() + 1e-12)
        if self.stripe_period:
            phase = rng.uniform(0, 2 * np.pi)
            yy = np.arange(size)[None, :]
            field = field + self.stripe_amp * np.sin(2 * np.pi * yy / self.stripe_period + phase)
        img = np.clip(np.rint(128 + self.contrast * field), 0, 255)
        return GrayImage(img.astype(np.uint8))


DEFAULT_CLASSES = (
    TextureClass("fine", (0.7, 0.7), contrast=30),
    TextureClass("fine_hi", (0.7, 0.7), contrast=60),
    TextureClass("blob", (2.5, 2.5), contrast=45),
    TextureClass("rows", (0.8, 3.0), contrast=40),
    TextureClass("cols", (3.0, 0.8), contrast=40),
    TextureClass("diag", (0.8, 3.0), angle=45, contrast=40),
    TextureClass("grain", (1.4, 1.4), contrast=35),
    TextureClass("stripes", (1.0, 1.0), contrast=25, stripe_period=8, stripe_amp=1.5),
    TextureClass("wide_stripes", (1.0, 1.0), contrast=25, stripe_period=16, stripe_amp=1.5),
    TextureClass("smooth", (4.0, 4.0), contrast=55),
)


def make_dataset(n_classes: int = 10, samples: int = 16, size: int = 64,
                 seed: int = 0, classes=DEFAULT_CLASSES) -> LabeledDataset:
    if n_classes > len(classes):
        raise ValueError(f"only {len(classes)} texture classes defined")
    chosen = sorted(classes[:n_classes], key=lambda c: c.name)
    rng = np.random.default_rng(seed)
    items = []
    for idx, cls in enumerate(chosen):
        for j in range(samples):
            items.append((idx, f"{cls.name}_{j:02d}", cls.sample(size, rng)))
    return LabeledDataset(tuple(c.name for c in chosen), tuple(items))


def write_dataset(dataset: LabeledDataset, root) -> Path:
    """Write as ``root/<class>/<sample>.pgm`` (the layout ``load_dataset`` reads)."""
    root = Path(root)
    for c, sid, img in dataset.samples:
        d = root / dataset.classes[c]
        d.mkdir(parents=True, exist_ok=True)
        save_pgm(img.pixels, d / f"{sid}.pgm")
    return root
