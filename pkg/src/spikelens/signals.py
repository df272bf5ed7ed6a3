"""Image <-> X/Y coordinate signal conversion."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .dataset_io import GrayImage
from .edges import DEFAULT_HIGH, DEFAULT_LOW, EdgeImage, canny
from .errors import EmptyDataset, EmptyImage, LengthMismatch

CSV_HEADER = ("index", "x", "y")


@dataclass(frozen=True, eq=False)
class CoordSignalPair:
    x: np.ndarray
    y: np.ndarray
    source_width: int
    source_height: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.shape != y.shape or x.ndim != 1:
            raise LengthMismatch(f"x has shape {x.shape}, y has shape {y.shape}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.x)

    def __eq__(self, other):
        if not isinstance(other, CoordSignalPair):
            return NotImplemented
        return (
            (self.source_width, self.source_height)
            == (other.source_width, other.source_height)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )


def _nonzero_grid(img) -> np.ndarray:
    if isinstance(img, EdgeImage):
        grid = img.mask
    elif isinstance(img, GrayImage):
        grid = img.pixels
    else:
        grid = np.asarray(img)
    if grid.ndim != 2 or grid.size == 0:
        raise EmptyImage(f"need a non-empty 2D image, got shape {grid.shape}")
    return grid > 0


def extract_coordinates(img) -> CoordSignalPair:
    """Column/row indices of every nonzero pixel, rows outer, columns inner."""
    grid = _nonzero_grid(img)
    rows, cols = np.nonzero(grid)  # C order == row-major scan
    return CoordSignalPair(cols, rows, grid.shape[1], grid.shape[0])


def round_half_away(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


def signals_to_image(sig: CoordSignalPair) -> GrayImage:
    canvas = np.zeros((sig.source_height, sig.source_width), dtype=np.uint8)
    if len(sig):
        cols = np.clip(round_half_away(sig.x), 0, sig.source_width - 1).astype(np.intp)
        rows = np.clip(round_half_away(sig.y), 0, sig.source_height - 1).astype(np.intp)
        canvas[rows, cols] = 255
    return GrayImage(canvas)


def length_reduction(
    images: Iterable[GrayImage], low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH
) -> float:
    """Fractional shrinkage of the coordinate signals when edges replace raw pixels.

    Returns ``1 - edge_len / raw_len`` summed over the dataset.
    """
    raw = edge = 0
    for img in images:
        raw += int(np.count_nonzero(img.pixels))
        edge += canny(img, low, high).count
    if raw == 0:
        raise EmptyDataset("dataset has no nonzero pixels; reduction undefined")
    return 1.0 - edge / raw


def format_float(value: float) -> str:
    return f"{value:.6g}"


def signals_to_csv(sig: CoordSignalPair) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i, (x, y) in enumerate(zip(sig.x, sig.y)):
        w.writerow((i, format_float(x), format_float(y)))
    return buf.getvalue()


def signals_from_csv(text: str, width: int, height: int) -> CoordSignalPair:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and set(CSV_HEADER) - set(rows[0]):
        raise ValueError(f"signal CSV must have columns {','.join(CSV_HEADER)}")
    rows.sort(key=lambda r: int(r["index"]))
    x = [float(r["x"]) for r in rows]
    y = [float(r["y"]) for r in rows]
    return CoordSignalPair(np.array(x), np.array(y), width, height)
