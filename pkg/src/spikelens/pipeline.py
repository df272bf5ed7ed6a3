"""End-to-end compositions: image -> signals -> spikes -> reconstruction -> metrics."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .codec import EncodingConfig, Method, SpikeTrain, decode, encode
from .dataset_io import GrayImage, IdxDataset, stratified_indices
from .edges import DEFAULT_HIGH, DEFAULT_LOW, canny
from .errors import EmptyDataset, MissingLabels
from .metrics import FitnessParams, MetricsReport, evaluate
from .signals import CoordSignalPair, extract_coordinates, signals_to_image
from .sweep import SweepGrid, combine_grids, grid_sweep

log = logging.getLogger(__name__)

AXES = ("x", "y")


def image_signals(
    img: GrayImage, use_edges: bool = True, low: float = DEFAULT_LOW, high: float = DEFAULT_HIGH
) -> CoordSignalPair:
    return extract_coordinates(canny(img, low, high) if use_edges else img)


def select_cohort(dataset: IdxDataset, samples: int, seed: int) -> list[int]:
    """Seeded digit-stratified subset, or a plain seeded subset when unlabeled."""
    if samples < 1:
        raise EmptyDataset("sample size must be at least 1")
    if dataset.labels is not None:
        return stratified_indices(dataset.labels, samples, seed)
    if samples > len(dataset):
        raise EmptyDataset(f"dataset has {len(dataset)} images, asked for {samples}")
    rng = np.random.default_rng(seed)
    return sorted(rng.choice(len(dataset), size=samples, replace=False).tolist())


def cohort_signals(
    dataset: IdxDataset,
    indices,
    use_edges: bool = True,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
) -> list[CoordSignalPair]:
    """Signals for each selected image; images yielding fewer than two samples are dropped."""
    out = []
    for i in indices:
        sig = image_signals(dataset.images[i], use_edges, low, high)
        if len(sig) < 2:
            log.warning("image %d yields %d signal samples; skipped", i, len(sig))
            continue
        out.append(sig)
    if not out:
        raise EmptyDataset("no image in the cohort produced a usable signal")
    return out


@dataclass(frozen=True)
class EncodedPair:
    x: SpikeTrain
    y: SpikeTrain


def encode_pair(sig: CoordSignalPair, cfg: EncodingConfig) -> EncodedPair:
    return EncodedPair(encode(sig.x, cfg), encode(sig.y, cfg))


def decode_pair(pair: EncodedPair, width: int, height: int) -> CoordSignalPair:
    return CoordSignalPair(decode(pair.x), decode(pair.y), width, height)


def evaluate_axis(
    original: CoordSignalPair, train: SpikeTrain, axis: str, params: FitnessParams = FitnessParams()
) -> MetricsReport:
    s = getattr(original, axis)
    return evaluate(s, decode(train), train, params)


def sweep_cohort(
    signals: list[CoordSignalPair],
    method: Method | str,
    adaptive: bool,
    sampling_axis=None,
    encoding_axis=None,
    params: FitnessParams = FitnessParams(),
    workers: int | None = None,
) -> dict[str, SweepGrid]:
    """Sweep the X and Y signals separately and report their cell-wise average too."""
    grids = {
        axis: grid_sweep(
            [getattr(s, axis) for s in signals],
            method,
            adaptive,
            sampling_axis,
            encoding_axis,
            params,
            workers,
        )
        for axis in AXES
    }
    grids["combined"] = combine_grids(grids["x"], grids["y"])
    return grids


@dataclass(frozen=True)
class DigitReport:
    digit: int
    index: int
    original: GrayImage
    edges: GrayImage
    signals: CoordSignalPair
    trains: EncodedPair
    reconstructed: CoordSignalPair
    reconstructed_image: GrayImage
    metrics: dict[str, MetricsReport]


def digit_reports(
    dataset: IdxDataset,
    cfg: EncodingConfig,
    seed: int = 0,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
    params: FitnessParams = FitnessParams(),
) -> list[DigitReport]:
    """Encode and reconstruct one seeded sample of every digit 0-9."""
    if dataset.labels is None:
        raise MissingLabels("the digit demo needs a labelled dataset")
    reports = []
    for digit, idx in enumerate(stratified_indices(dataset.labels, 10, seed)):
        img = dataset.images[idx]
        edge = canny(img, low, high)
        sig = extract_coordinates(edge)
        trains = encode_pair(sig, cfg)
        recon = decode_pair(trains, sig.source_width, sig.source_height)
        reports.append(
            DigitReport(
                digit,
                idx,
                img,
                edge.to_gray(),
                sig,
                trains,
                recon,
                signals_to_image(recon),
                {axis: evaluate_axis(sig, getattr(trains, axis), axis, params) for axis in AXES},
            )
        )
    return reports
