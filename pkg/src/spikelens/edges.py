"""Canny edge detection: Gaussian blur, Sobel gradients, non-maximum
suppression and hysteresis thresholding."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .dataset_io import GrayImage
from .errors import EmptyImage, InvalidThresholds

GAUSSIAN_SIZE = 5
GAUSSIAN_SIGMA = 1.4
DEFAULT_LOW = 100.0
DEFAULT_HIGH = 200.0
MAGNITUDE_CEILING = 255.0

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
SOBEL_Y = SOBEL_X.T.copy()

# (row, col) offset of one NMS neighbour per direction bin; the other is its negation.
# Rows grow downwards, so a 45 degree gradient points to the lower right.
_NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


@dataclass(frozen=True)
class GradientField:
    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    direction: np.ndarray  # radians, atan2(gy, gx)


@dataclass(frozen=True, eq=False)
class EdgeImage:
    mask: np.ndarray

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    def to_gray(self) -> GrayImage:
        return GrayImage(np.where(self.mask, 255, 0).astype(np.uint8))

    def __eq__(self, other):
        if not isinstance(other, EdgeImage):
            return NotImplemented
        return bool(np.array_equal(self.mask, other.mask))


def _as_float_grid(img) -> np.ndarray:
    arr = img.pixels if isinstance(img, GrayImage) else np.asarray(img)
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise EmptyImage(f"need a non-empty 2D image, got shape {arr.shape}")
    return arr


def gaussian_kernel(size: int = GAUSSIAN_SIZE, sigma: float = GAUSSIAN_SIGMA) -> np.ndarray:
    half = size // 2
    ax = np.arange(-half, half + 1, dtype=np.float64)
    k = np.exp(-(ax[:, None] ** 2 + ax[None, :] ** 2) / (2.0 * sigma**2))
    return k / k.sum()


def gaussian_blur(img, sigma: float = GAUSSIAN_SIGMA) -> np.ndarray:
    """Smooth with a normalized 5x5 Gaussian, replicating border pixels."""
    arr = _as_float_grid(img)
    return ndimage.correlate(arr, gaussian_kernel(GAUSSIAN_SIZE, sigma), mode="nearest")


def sobel_gradients(img) -> GradientField:
    arr = _as_float_grid(img)
    gx = ndimage.correlate(arr, SOBEL_X, mode="nearest")
    gy = ndimage.correlate(arr, SOBEL_Y, mode="nearest")
    return GradientField(gx, gy, np.hypot(gx, gy), np.arctan2(gy, gx))


def direction_bins(direction: np.ndarray) -> np.ndarray:
    """Quantize gradient angles into bins 0..3 for 0, 45, 90 and 135 degrees."""
    deg = np.mod(np.degrees(direction), 180.0)
    return np.digitize(deg, (22.5, 67.5, 112.5, 157.5)) % 4


def nonmax_suppress(g: GradientField) -> np.ndarray:
    """Zero every pixel that is not a local maximum along its gradient direction.

    Ties survive; border pixels never do.
    """
    mag = np.asarray(g.magnitude, dtype=np.float64)
    if mag.ndim != 2 or mag.size == 0:
        raise EmptyImage("empty gradient field")
    h, w = mag.shape
    out = np.zeros_like(mag)
    if h < 3 or w < 3:
        return out
    bins = direction_bins(np.asarray(g.direction))
    padded = np.pad(mag, 1, mode="constant")
    keep = np.zeros(mag.shape, dtype=bool)
    for b, (dr, dc) in enumerate(_NMS_OFFSETS):
        fwd = padded[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
        bwd = padded[1 - dr : 1 - dr + h, 1 - dc : 1 - dc + w]
        keep |= (bins == b) & (mag >= fwd) & (mag >= bwd)
    keep[0, :] = keep[-1, :] = False
    keep[:, 0] = keep[:, -1] = False
    out[keep] = mag[keep]
    return out


def hysteresis(img, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH) -> EdgeImage:
    """Strong pixels (>= high) plus weak pixels (>= low) 8-connected to one."""
    if not 0 <= low <= high:
        raise InvalidThresholds(f"need 0 <= low <= high, got low={low}, high={high}")
    arr = _as_float_grid(img)
    weak = arr >= low
    strong = arr >= high
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return EdgeImage(np.zeros(arr.shape, dtype=bool))
    seeded = np.zeros(n + 1, dtype=bool)
    seeded[labels[strong]] = True
    seeded[0] = False
    return EdgeImage(seeded[labels])


def canny(img, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH) -> EdgeImage:
    if not 0 <= low <= high:
        raise InvalidThresholds(f"need 0 <= low <= high, got low={low}, high={high}")
    thin = nonmax_suppress(sobel_gradients(gaussian_blur(img)))
    return hysteresis(np.minimum(thin, MAGNITUDE_CEILING), low, high)
