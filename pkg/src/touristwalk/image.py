"""
Grayscale rasters, dataset ingestion and pixel-level geometry.

Coordinates follow (x, y) = (row, column), zero-based, so that the
row-major pixel code ``W*x + y`` enumerates ``0 .. W*H-1``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError


class DataError(ValueError):
    """Raised for unusable input data (bad files, malformed tables, bad layouts)."""


IMAGE_SUFFIXES = (".pgm", ".png")

# self first, then clockwise starting at north; (dx, dy) with x = row
NEIGHBOR_OFFSETS = np.array(
    [(0, 0), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)],
    dtype=np.int64,
)


class PixelCoord(NamedTuple):
    x: int  # row
    y: int  # column


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Immutable 8-bit grayscale image stored as an (H, W) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise DataError(f"image must be 2-D, got shape {arr.shape}")
        h, w = arr.shape
        if h < 2 or w < 2:
            raise DataError(f"image dimensions must be at least 2x2, got {w}x{h} (WxH)")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise DataError(f"intensities must be integers, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise DataError("intensities must lie in [0, 255]")
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_flat(cls, width: int, height: int, intensities) -> "GrayImage":
        flat = np.asarray(intensities)
        if flat.size != width * height:
            raise DataError(f"expected {width * height} intensities, got {flat.size}")
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def size(self) -> int:
        return self.pixels.size

    @property
    def intensities(self) -> np.ndarray:
        return self.pixels.ravel()

    def __getitem__(self, p) -> int:
        return int(self.pixels[p[0], p[1]])

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self):
        return f"GrayImage(width={self.width}, height={self.height})"


@dataclass(frozen=True)
class LabeledDataset:
    classes: tuple[str, ...]
    samples: tuple[tuple[int, str, GrayImage], ...]

    def __len__(self):
        return len(self.samples)

    def labels(self) -> np.ndarray:
        return np.array([c for c, _, _ in self.samples], dtype=np.int64)


def _check_coord(p, image: GrayImage) -> PixelCoord:
    x, y = int(p[0]), int(p[1])
    if not (0 <= x < image.height and 0 <= y < image.width):
        raise IndexError(
            f"pixel ({x}, {y}) outside image with {image.height} rows and {image.width} columns"
        )
    return PixelCoord(x, y)


def pixel_code(p, image: GrayImage) -> int:
    """Row-major code ``W*x + y`` of pixel ``p``."""
    x, y = _check_coord(p, image)
    return image.width * x + y


def coord_from_code(code: int, image: GrayImage) -> PixelCoord:
    if not 0 <= code < image.size:
        raise IndexError(f"pixel code {code} outside [0, {image.size})")
    return PixelCoord(*divmod(int(code), image.width))


def neighbors(p, image: GrayImage) -> list[PixelCoord]:
    """The pixel itself followed by its in-bounds 8-connected ring, clockwise from north."""
    x, y = _check_coord(p, image)
    out = []
    for dx, dy in NEIGHBOR_OFFSETS:
        nx, ny = x + int(dx), y + int(dy)
        if 0 <= nx < image.height and 0 <= ny < image.width:
            out.append(PixelCoord(nx, ny))
    return out


def weight(i, j, image: GrayImage) -> int:
    i = _check_coord(i, image)
    j = _check_coord(j, image)
    return abs(image[i] - image[j])


def luma(rgb: np.ndarray) -> np.ndarray:
    """Integer luma, round((299 R + 587 G + 114 B) / 1000), half up."""
    rgb = np.asarray(rgb, dtype=np.int64)
    acc = 299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2]
    return ((acc + 500) // 1000).astype(np.uint8)


def load_image(path) -> GrayImage:
    """Read an 8-bit PGM (P5) or PNG (gray or RGB) file."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("RGBA" if "transparency" in im.info else "RGB")
                mode = im.mode
            if mode == "L":
                arr = np.asarray(im, dtype=np.uint8)
            elif mode == "LA":
                arr = np.asarray(im, dtype=np.uint8)[..., 0]
            elif mode in ("RGB", "RGBA"):
                arr = luma(np.asarray(im, dtype=np.uint8)[..., :3])
            else:
                raise DataError(
                    f"{path}: unsupported pixel format {mode!r}; expected 8-bit gray or RGB"
                )
    except (OSError, UnidentifiedImageError) as exc:
        raise DataError(f"{path}: cannot read image ({exc})") from exc
    try:
        return GrayImage(arr)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


def save_pgm(pixels: np.ndarray, path) -> None:
    """Write an (H, W) uint8 array as binary PGM (P5)."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def list_images(directory) -> list[Path]:
    directory = Path(directory)
    return sorted(
        (p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.name,
    )


def load_dataset(root) -> LabeledDataset:
    """Load a ``root/<class>/<sample>.{pgm,png}`` tree.

    Classes are sorted lexicographically and samples by file name, so the
    result does not depend on directory listing order.
    """
    root = Path(root)
    if not root.is_dir():
        raise DataError(f"{root}: not a directory")
    class_dirs = sorted((d for d in root.iterdir() if d.is_dir()), key=lambda d: d.name)
    if not class_dirs:
        raise DataError(f"{root}: no class directories")

    classes, samples, failures = [], [], []
    for d in class_dirs:
        files = list_images(d)
        if not files:
            raise DataError(f"{d}: empty class directory")
        idx = len(classes)
        classes.append(d.name)
        for f in files:
            try:
                samples.append((idx, f.stem, load_image(f)))
            except DataError as exc:
                failures.append(str(exc))
    if failures:
        raise DataError("unreadable files:" + os.linesep + os.linesep.join(failures))
    return LabeledDataset(tuple(classes), tuple(samples))
