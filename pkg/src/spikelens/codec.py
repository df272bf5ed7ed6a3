"""Temporal spike codecs: step-forward (SF), threshold-based representation
(TBR), and the adaptive-sampling wrapper that resamples a signal before
encoding and collapses the reconstruction back onto the original grid."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np

from .errors import (
    CountMismatch,
    EmptySignal,
    InvalidSpikeTrain,
    NonPositiveThreshold,
    SignalTooShort,
)


class Method(str, Enum):
    SF = "sf"
    TBR = "tbr"


def _check_threshold(value: float, name: str) -> float:
    value = float(value)
    if not value > 0 or not np.isfinite(value):
        raise NonPositiveThreshold(f"{name} must be a positive finite number, got {value}")
    return value


def _as_signal(s, min_len: int) -> np.ndarray:
    arr = np.asarray(s, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"signal must be one-dimensional, got shape {arr.shape}")
    if len(arr) == 0:
        raise EmptySignal("signal is empty")
    if len(arr) < min_len:
        raise SignalTooShort(f"need at least {min_len} samples, got {len(arr)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("signal contains non-finite values")
    return arr


@dataclass(frozen=True)
class EncodingConfig:
    method: Method
    adaptive: bool = False
    sampling_threshold: float | None = None
    encoding_threshold: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(
            self, "encoding_threshold", _check_threshold(self.encoding_threshold, "encoding_threshold")
        )
        if self.adaptive:
            if self.sampling_threshold is None:
                raise NonPositiveThreshold("adaptive encoding needs a sampling_threshold")
            object.__setattr__(
                self, "sampling_threshold", _check_threshold(self.sampling_threshold, "sampling_threshold")
            )
        elif self.sampling_threshold is not None:
            object.__setattr__(self, "sampling_threshold", float(self.sampling_threshold))


@dataclass(frozen=True, eq=False)
class AdaptiveSample:
    values: np.ndarray
    counts: np.ndarray
    original_length: int


@dataclass(frozen=True, eq=False)
class SpikeTrain:
    spikes: np.ndarray
    startpoint: float
    config: EncodingConfig
    counts: np.ndarray | None = field(default=None)

    def __post_init__(self):
        spikes = np.asarray(self.spikes)
        if spikes.ndim != 1 or len(spikes) == 0:
            raise InvalidSpikeTrain("spike train must be a non-empty 1D sequence")
        if not np.isin(spikes, (-1, 0, 1)).all():
            raise InvalidSpikeTrain("spikes must be -1, 0 or +1")
        spikes = spikes.astype(np.int8)
        spikes.flags.writeable = False
        object.__setattr__(self, "spikes", spikes)
        object.__setattr__(self, "startpoint", float(self.startpoint))
        if self.config.adaptive != (self.counts is not None):
            raise InvalidSpikeTrain("counts must be present exactly when the config is adaptive")
        if self.counts is not None:
            counts = np.asarray(self.counts, dtype=np.int64)
            if counts.ndim != 1 or (counts < 0).any():
                raise InvalidSpikeTrain("counts must be a 1D sequence of non-negative integers")
            counts.flags.writeable = False
            object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return len(self.spikes)

    def __eq__(self, other):
        if not isinstance(other, SpikeTrain):
            return NotImplemented
        same_counts = (self.counts is None and other.counts is None) or (
            self.counts is not None
            and other.counts is not None
            and np.array_equal(self.counts, other.counts)
        )
        return (
            self.config == other.config
            and self.startpoint == other.startpoint
            and np.array_equal(self.spikes, other.spikes)
            and same_counts
        )

    def to_json(self) -> str:
        doc = {
            "method": self.config.method.value,
            "adaptive": self.config.adaptive,
            "sampling_threshold": self.config.sampling_threshold,
            "encoding_threshold": self.config.encoding_threshold,
            "startpoint": self.startpoint,
        }
        if self.counts is not None:
            doc["counts"] = self.counts.tolist()
        doc["spikes"] = self.spikes.tolist()
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SpikeTrain":
        doc = json.loads(text)
        cfg = EncodingConfig(
            method=doc["method"],
            adaptive=bool(doc["adaptive"]),
            sampling_threshold=doc.get("sampling_threshold"),
            encoding_threshold=doc["encoding_threshold"],
        )
        counts = doc.get("counts")
        return cls(
            np.asarray(doc["spikes"]),
            doc["startpoint"],
            cfg,
            None if counts is None else np.asarray(counts, dtype=np.int64),
        )


def adaptive_resample(s, sampling_threshold: float) -> AdaptiveSample:
    """Insert linearly interpolated points so no step exceeds the threshold.

    Interval ``i`` contributes ``ceil(|s[i+1]-s[i]| / threshold)`` samples
    (zero for flat intervals) and the final sample is the last input value.
    """
    thr = _check_threshold(sampling_threshold, "sampling_threshold")
    s = _as_signal(s, 2)
    delta = s[1:] - s[:-1]
    counts = np.ceil(np.abs(delta / thr)).astype(np.int64)
    total = int(counts.sum())
    seg = np.repeat(np.arange(len(counts)), counts)
    starts = np.cumsum(counts) - counts
    j = np.arange(total) - starts[seg]
    values = np.empty(total + 1, dtype=np.float64)
    values[:total] = s[seg] + (j / counts[seg]) * delta[seg]
    values[total] = s[-1]
    return AdaptiveSample(values, counts, len(s))


@numba.njit(cache=True, nogil=True)
def _sf_spikes(s, thr):
    out = np.zeros(len(s), dtype=np.int8)
    base = s[0]
    for t in range(1, len(s)):
        if s[t] > base + thr:
            out[t] = 1
            base = base + thr
        elif s[t] < base - thr:
            out[t] = -1
            base = base - thr
    return out


def sf_encode(s, encoding_threshold: float) -> SpikeTrain:
    thr = _check_threshold(encoding_threshold, "encoding_threshold")
    s = _as_signal(s, 1)
    cfg = EncodingConfig(Method.SF, encoding_threshold=thr)
    return SpikeTrain(_sf_spikes(s, thr), s[0], cfg)


def tbr_encode(s, encoding_threshold: float) -> SpikeTrain:
    """Spike on every one-step change larger than the threshold.

    The last difference is duplicated so the train is as long as the signal.
    """
    thr = _check_threshold(encoding_threshold, "encoding_threshold")
    s = _as_signal(s, 2)
    diff = np.empty_like(s)
    diff[:-1] = s[1:] - s[:-1]
    diff[-1] = diff[-2]
    spikes = np.where(diff > thr, 1, np.where(diff < -thr, -1, 0))
    cfg = EncodingConfig(Method.TBR, encoding_threshold=thr)
    return SpikeTrain(spikes, s[0], cfg)


def temporal_decode(train: SpikeTrain) -> np.ndarray:
    steps = train.config.encoding_threshold * train.spikes.astype(np.float64)
    steps[0] = train.startpoint
    return np.add.accumulate(steps)


def collapse_to_original(recon_a: np.ndarray, counts) -> np.ndarray:
    """Pick the reconstructed samples that sit on the original time grid."""
    recon_a = np.asarray(recon_a, dtype=np.float64)
    counts = np.asarray(counts, dtype=np.int64)
    if int(counts.sum()) + 1 != len(recon_a):
        raise CountMismatch(
            f"counts sum to {int(counts.sum())} but the train has {len(recon_a)} samples"
        )
    out = np.empty(len(counts) + 1, dtype=np.float64)
    out[:-1] = recon_a[np.cumsum(counts) - counts]
    out[-1] = recon_a[-1]
    return out


def adaptive_decode(train: SpikeTrain) -> np.ndarray:
    if train.counts is None:
        raise CountMismatch("train carries no adaptive sample counts")
    return collapse_to_original(temporal_decode(train), train.counts)


def encode(s, cfg: EncodingConfig) -> SpikeTrain:
    s = _as_signal(s, 2)
    counts = None
    if cfg.adaptive:
        sample = adaptive_resample(s, cfg.sampling_threshold)
        s, counts = sample.values, sample.counts
    if cfg.method is Method.SF:
        spikes = _sf_spikes(s, cfg.encoding_threshold)
    else:
        if len(s) < 2:
            # flat input resampled down to one point: no change, no spikes
            spikes = np.zeros(1, dtype=np.int8)
        else:
            spikes = tbr_encode(s, cfg.encoding_threshold).spikes
    return SpikeTrain(spikes, s[0], cfg, counts)


def decode(train: SpikeTrain) -> np.ndarray:
    if train.counts is not None:
        return adaptive_decode(train)
    return temporal_decode(train)
