"""MNIST IDX ingestion and binary PGM (P5) image I/O."""

from __future__ import annotations

import gzip
import re
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    EmptyDataset,
    LabelOutOfRange,
    MissingLabels,
    TruncatedFile,
    UnsupportedFormat,
    WrongMagic,
)

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
_GZIP_MAGIC = b"\x1f\x8b"


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image stored row-major as a (height, width) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise ValueError(f"expected a 2D pixel grid, got shape {px.shape}")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise ValueError("pixel intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        px = px.copy()
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    @classmethod
    def from_flat(cls, width: int, height: int, pixels: Sequence[int]) -> "GrayImage":
        flat = np.asarray(pixels)
        if flat.size != width * height:
            raise ValueError(f"{flat.size} pixels do not fill a {width}x{height} image")
        return cls(flat.reshape(height, width))


@dataclass(frozen=True)
class IdxDataset:
    images: tuple[GrayImage, ...]
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        shapes = {img.pixels.shape for img in self.images}
        if len(shapes) > 1:
            raise ValueError(f"images have mixed dimensions: {sorted(shapes)}")
        if self.labels is not None:
            if len(self.labels) != len(self.images):
                raise ValueError(
                    f"{len(self.labels)} labels for {len(self.images)} images"
                )
            if any(not 0 <= lab <= 9 for lab in self.labels):
                raise LabelOutOfRange("labels must be digits 0-9")

    def __len__(self) -> int:
        return len(self.images)


def maybe_gunzip(blob: bytes) -> bytes:
    if blob[:2] == _GZIP_MAGIC:
        return gzip.decompress(blob)
    return blob


def _read_header(blob: bytes, magic: int, ndims: int) -> tuple[int, ...]:
    size = 4 * (1 + ndims)
    if len(blob) < 4:
        raise TruncatedFile("file shorter than the IDX magic number")
    (found,) = struct.unpack(">I", blob[:4])
    if found != magic:
        raise WrongMagic(f"expected IDX magic 0x{magic:08x}, found 0x{found:08x}")
    if len(blob) < size:
        raise TruncatedFile("IDX header is incomplete")
    return struct.unpack(f">{ndims}I", blob[4:size])


def parse_idx_images(blob: bytes) -> list[GrayImage]:
    """Parse an IDX3 unsigned-byte image file (gzip-compressed or raw)."""
    blob = maybe_gunzip(blob)
    n, rows, cols = _read_header(blob, IDX_IMAGES_MAGIC, 3)
    need = 16 + n * rows * cols
    if len(blob) < need:
        raise TruncatedFile(f"expected {need} bytes for {n} images, got {len(blob)}")
    data = np.frombuffer(blob, dtype=np.uint8, count=n * rows * cols, offset=16)
    data = data.reshape(n, rows, cols)
    return [GrayImage(img) for img in data]


def parse_idx_labels(blob: bytes) -> list[int]:
    blob = maybe_gunzip(blob)
    (n,) = _read_header(blob, IDX_LABELS_MAGIC, 1)
    if len(blob) < 8 + n:
        raise TruncatedFile(f"expected {8 + n} bytes for {n} labels, got {len(blob)}")
    labels = np.frombuffer(blob, dtype=np.uint8, count=n, offset=8)
    if n and labels.max() > 9:
        bad = int(labels[labels > 9][0])
        raise LabelOutOfRange(f"label byte {bad} is not a digit")
    return labels.astype(int).tolist()


def load_idx_dataset(images_path: str | Path, labels_path: str | Path | None = None) -> IdxDataset:
    images = parse_idx_images(Path(images_path).read_bytes())
    labels = None
    if labels_path is not None:
        labels = tuple(parse_idx_labels(Path(labels_path).read_bytes()))
    return IdxDataset(tuple(images), labels)


# PGM header: magic, width, height, maxval separated by whitespace/comments,
# then exactly one whitespace byte before the raster.
_PGM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*([^\s#]+)")


def read_pgm(blob: bytes) -> GrayImage:
    """Decode a binary (P5) PGM with maxval <= 255."""
    pos = 0
    tokens = []
    for _ in range(4):
        m = _PGM_TOKEN.match(blob, pos)
        if m is None:
            raise TruncatedFile("incomplete PGM header")
        tokens.append(m.group(1))
        pos = m.end()
        if tokens[0] != b"P5":
            raise UnsupportedFormat(f"not a binary PGM (magic {tokens[0][:2]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise UnsupportedFormat("malformed PGM header") from None
    if not 0 < maxval <= 255:
        raise UnsupportedFormat(f"maxval {maxval} not supported (need 1..255)")
    pos += 1  # single whitespace after maxval
    need = width * height
    raster = blob[pos : pos + need]
    if len(raster) < need:
        raise TruncatedFile(f"expected {need} raster bytes, got {len(raster)}")
    px = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    if px.size and px.max() > maxval:
        raise UnsupportedFormat("pixel value exceeds maxval")
    return GrayImage(px)


def write_pgm(image: GrayImage) -> bytes:
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def stratified_indices(labels: Sequence[int], total: int, seed: int) -> list[int]:
    """Seeded uniform sample of ``total`` indices spread evenly over the digits.

    Each digit gets ``total // 10`` picks; the remainder goes to the lowest
    digits. Result is ordered by digit, then by dataset index.
    """
    if total < 1:
        raise EmptyDataset("sample size must be at least 1")
    if labels is None:
        raise MissingLabels("stratified sampling needs labels")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    picks: list[int] = []
    for digit in range(10):
        k = total // 10 + (1 if digit < total % 10 else 0)
        pool = np.flatnonzero(labels == digit)
        if k > len(pool):
            raise EmptyDataset(f"only {len(pool)} samples of digit {digit}, need {k}")
        picks.extend(sorted(rng.choice(pool, size=k, replace=False).tolist()))
    return picks
