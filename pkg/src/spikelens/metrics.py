"""Reconstruction precision (RMSE, SNR) and spike efficiency (AFR, spike
count) metrics, plus the fitness score that trades them off."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import Sequence

import numpy as np

from .codec import SpikeTrain
from .errors import EmptySignal, EmptyTrain, LengthMismatch, UndefinedFitness, ZeroSignalPower

CSV_HEADER = ("rmse", "snr_db", "afr", "spike_count", "fitness")


@dataclass(frozen=True)
class FitnessParams:
    m: float = 1.0  # exponent on RMSE
    n: float = 1.0  # exponent on spike count

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("fitness exponents must be non-negative")


@dataclass(frozen=True)
class MetricsReport:
    rmse: float
    snr_db: float
    afr: float
    spike_count: float  # integer for one train, a mean once aggregated
    fitness: float

    def csv_row(self) -> str:
        return ",".join(_fmt(v) for v in astuple(self))


def _fmt(value: float) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.6g}"


def _pair(s, r) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(s, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    if s.shape != r.shape:
        raise LengthMismatch(f"signal lengths differ: {s.shape} vs {r.shape}")
    if s.size == 0:
        raise EmptySignal("metrics need at least one sample")
    return s, r


def power(s) -> float:
    s = np.asarray(s, dtype=np.float64)
    return float(np.mean(np.abs(s) ** 2))


def rmse(s, r) -> float:
    s, r = _pair(s, r)
    return math.sqrt(float(np.mean((s - r) ** 2)))


def snr(s, r) -> float:
    """``20*log10(P(s) / P(s - r))`` in dB; ``inf`` for an exact reconstruction."""
    s, r = _pair(s, r)
    ps = power(s)
    if ps == 0:
        raise ZeroSignalPower("original signal is all zeros")
    pe = power(s - r)
    if pe == 0:
        return math.inf
    return 20.0 * math.log10(ps / pe)


def _spikes(train) -> np.ndarray:
    return np.asarray(train.spikes if isinstance(train, SpikeTrain) else train)


def afr(train) -> float:
    sp = _spikes(train)
    if sp.size == 0:
        raise EmptyTrain("average firing rate of an empty train")
    return float(np.abs(sp).sum()) / sp.size


def spike_count(train) -> int:
    return int(np.count_nonzero(_spikes(train)))


def fitness(snr_db: float, rmse_value: float, count: float, params: FitnessParams = FitnessParams()) -> float:
    denom = rmse_value**params.m * count**params.n
    if denom == 0:
        if math.isfinite(snr_db) and snr_db != 0:
            return math.copysign(math.inf, snr_db)
        raise UndefinedFitness(
            f"fitness undefined for snr={snr_db} with rmse={rmse_value}, spike count={count}"
        )
    return snr_db / denom


def evaluate(s, r, train, params: FitnessParams = FitnessParams()) -> MetricsReport:
    e = rmse(s, r)
    db = snr(s, r)
    count = spike_count(train)
    return MetricsReport(e, db, afr(train), count, fitness(db, e, count, params))


def mean_report(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Field-wise mean; summation order follows the sequence order."""
    if not reports:
        raise ValueError("cannot average zero reports")
    cols = np.array([astuple(r) for r in reports], dtype=np.float64)
    with np.errstate(invalid="ignore"):
        means = cols.mean(axis=0)
    return MetricsReport(*(float(v) for v in means))


def fitness_of_means(mean: MetricsReport, params: FitnessParams = FitnessParams()) -> float:
    try:
        return fitness(mean.snr_db, mean.rmse, mean.spike_count, params)
    except UndefinedFitness:
        return math.nan
