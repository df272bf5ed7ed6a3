"""Grid search over (sampling threshold, encoding threshold)."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codec import EncodingConfig, Method, decode, encode
from .errors import NoFiniteCell, SpikelensError, UndefinedFitness
from .metrics import (
    FitnessParams,
    MetricsReport,
    afr,
    fitness,
    fitness_of_means,
    mean_report,
    rmse,
    snr,
    spike_count,
)

THREADS_ENV = "SPIKELENS_THREADS"
CSV_HEADER = (
    "sampling_threshold",
    "encoding_threshold",
    "rmse",
    "snr_db",
    "afr",
    "spike_count",
    "fitness",
)


def default_axes() -> tuple[tuple[float, ...], tuple[float, ...]]:
    # i / 10 is the double nearest each one-decimal value, so it prints cleanly
    axis = tuple(i / 10 for i in range(1, 21))
    return axis, axis


@dataclass(frozen=True)
class SweepCell:
    sampling_threshold: float | None
    encoding_threshold: float
    mean: MetricsReport  # per-image averages; mean.fitness is the mean per-image fitness
    fitness_of_means: float
    defined: bool  # False when any image had an undefined metric or fitness

    @property
    def finite(self) -> bool:
        return self.defined and math.isfinite(self.mean.fitness)


@dataclass(frozen=True)
class SweepGrid:
    method: Method
    adaptive: bool
    sampling_axis: tuple[float, ...]  # empty for non-adaptive sweeps
    encoding_axis: tuple[float, ...]
    cells: tuple[tuple[SweepCell, ...], ...]
    best: tuple[float | None, float] | None
    params: FitnessParams = FitnessParams()

    @property
    def best_cell(self) -> SweepCell:
        if self.best is None:
            raise NoFiniteCell("no cell has a finite fitness")
        for row in self.cells:
            for cell in row:
                if (cell.sampling_threshold, cell.encoding_threshold) == self.best:
                    return cell
        raise AssertionError("best cell missing from grid")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.cells:
            for c in row:
                w.writerow(
                    (
                        "" if c.sampling_threshold is None else f"{c.sampling_threshold:.1f}",
                        f"{c.encoding_threshold:.1f}",
                        *(f"{v:.6g}" for v in (c.mean.rmse, c.mean.snr_db, c.mean.afr,
                                               c.mean.spike_count, c.mean.fitness)),
                    )
                )
        return buf.getvalue()


def evaluate_cell(
    signals: Sequence[np.ndarray], cfg: EncodingConfig, params: FitnessParams = FitnessParams()
) -> SweepCell:
    reports = []
    defined = True
    for s in signals:
        try:
            train = encode(s, cfg)
            r = decode(train)
            err, db = rmse(s, r), snr(s, r)
            count, rate = spike_count(train), afr(train)
        except SpikelensError:
            defined = False
            reports.append(MetricsReport(*[math.nan] * 5))
            continue
        try:
            fit = fitness(db, err, count, params)
        except UndefinedFitness:
            defined = False
            fit = math.nan
        reports.append(MetricsReport(err, db, rate, count, fit))
    mean = mean_report(reports)
    return SweepCell(
        cfg.sampling_threshold if cfg.adaptive else None,
        cfg.encoding_threshold,
        mean,
        fitness_of_means(mean, params),
        defined,
    )


def pick_best(cells: Sequence[Sequence[SweepCell]]) -> tuple[float | None, float] | None:
    """Highest finite mean fitness; ties go to the smaller encoding, then sampling threshold."""
    best = None
    best_key = None
    for row in cells:
        for c in row:
            if not c.finite:
                continue
            key = (-c.mean.fitness, c.encoding_threshold, c.sampling_threshold or 0.0)
            if best_key is None or key < best_key:
                best, best_key = c, key
    return None if best is None else (best.sampling_threshold, best.encoding_threshold)


def worker_count(requested: int | None = None) -> int:
    if requested is None:
        env = os.environ.get(THREADS_ENV)
        requested = int(env) if env else (os.cpu_count() or 1)
    return max(1, requested)


_POOL_SIGNALS: list[np.ndarray] = []


def _init_pool(signals):
    global _POOL_SIGNALS
    _POOL_SIGNALS = signals


def _pool_cell(args):
    cfg, params = args
    return evaluate_cell(_POOL_SIGNALS, cfg, params)


def grid_sweep(
    signals: Sequence,
    method: Method | str,
    adaptive: bool,
    sampling_axis: Sequence[float] | None = None,
    encoding_axis: Sequence[float] | None = None,
    params: FitnessParams = FitnessParams(),
    workers: int | None = None,
) -> SweepGrid:
    """Encode/decode every signal at every grid point and average the metrics.

    Cells are independent, so the result does not depend on ``workers``.
    """
    method = Method(method)
    signals = [np.asarray(s, dtype=np.float64) for s in signals]
    if not signals:
        raise ValueError("sweep needs at least one signal")
    default_s, default_e = default_axes()
    enc_axis = tuple(float(v) for v in (encoding_axis or default_e))
    samp_axis = tuple(float(v) for v in (sampling_axis or default_s)) if adaptive else ()
    if not enc_axis or (adaptive and not samp_axis):
        raise ValueError("sweep axes must be non-empty")

    rows = samp_axis if adaptive else (None,)
    configs = [
        [EncodingConfig(method, adaptive, st, et) for et in enc_axis] for st in rows
    ]
    flat = [(cfg, params) for row in configs for cfg in row]
    n = worker_count(workers)
    if n == 1 or len(flat) == 1:
        results = [evaluate_cell(signals, cfg, p) for cfg, p in flat]
    else:
        with ProcessPoolExecutor(n, initializer=_init_pool, initargs=(signals,)) as ex:
            results = list(ex.map(_pool_cell, flat, chunksize=max(1, len(flat) // (4 * n))))
    k = len(enc_axis)
    cells = tuple(tuple(results[i * k : (i + 1) * k]) for i in range(len(rows)))
    return SweepGrid(method, adaptive, samp_axis, enc_axis, cells, pick_best(cells), params)


def combine_grids(a: SweepGrid, b: SweepGrid) -> SweepGrid:
    """Average two grids over the same axes cell by cell (e.g. X and Y signals)."""
    if (a.sampling_axis, a.encoding_axis) != (b.sampling_axis, b.encoding_axis):
        raise ValueError("grids have different axes")
    cells = tuple(
        tuple(
            SweepCell(
                ca.sampling_threshold,
                ca.encoding_threshold,
                mean_report([ca.mean, cb.mean]),
                fitness_of_means(mean_report([ca.mean, cb.mean]), a.params),
                ca.defined and cb.defined,
            )
            for ca, cb in zip(ra, rb)
        )
        for ra, rb in zip(a.cells, b.cells)
    )
    return SweepGrid(
        a.method, a.adaptive, a.sampling_axis, a.encoding_axis, cells, pick_best(cells), a.params
    )
