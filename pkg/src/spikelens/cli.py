"""spikelens command-line interface."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import pipeline
from .codec import EncodingConfig, SpikeTrain, decode
from .dataset_io import GrayImage, IdxDataset, load_idx_dataset, read_pgm, write_pgm
from .edges import DEFAULT_HIGH, DEFAULT_LOW, canny
from .errors import MissingLabels, NoFiniteCell, SpikelensError
from .metrics import CSV_HEADER as METRICS_HEADER
from .metrics import FitnessParams
from .signals import (
    CoordSignalPair,
    format_float,
    length_reduction,
    signals_from_csv,
    signals_to_csv,
    signals_to_image,
)
from .sweep import default_axes

log = logging.getLogger("spikelens")

# optimal thresholds reported for adaptive SF
DEFAULT_SAMPLING = 0.1
DEFAULT_ENCODING = 0.2


class UsageError(Exception):
    """Bad input files or flag combinations; exits with status 2."""


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def non_negative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def float_list(text: str) -> list[float]:
    values = [positive_float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty axis")
    return sorted(values)


def _read_bytes(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _read_text(path) -> str:
    return _read_bytes(path).decode("utf-8")


def _load_dataset(args, need_labels: bool = False) -> IdxDataset:
    for p in (args.mnist, args.labels):
        if p is not None and not Path(p).is_file():
            raise UsageError(f"no such file: {p}")
    if need_labels and args.labels is None:
        raise MissingLabels("--labels is required for this command")
    return load_idx_dataset(args.mnist, args.labels)


def _load_image(args) -> tuple[GrayImage, str]:
    if args.image is not None:
        return read_pgm(_read_bytes(args.image)), Path(args.image).stem
    if args.mnist is None:
        raise UsageError("give --image or --mnist with --index")
    ds = _load_dataset(args)
    if not 0 <= args.index < len(ds):
        raise UsageError(f"--index {args.index} out of range (dataset has {len(ds)} images)")
    return ds.images[args.index], f"mnist_{args.index}"


def _write(path: Path, data: bytes | str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        path.write_text(data)
    else:
        path.write_bytes(data)


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        _write(Path(output), text)


def _config(args) -> EncodingConfig:
    return EncodingConfig(
        args.method,
        args.adaptive,
        args.sampling_threshold if args.adaptive else None,
        args.encoding_threshold,
    )


def _params(args) -> FitnessParams:
    return FitnessParams(args.m, args.n)


def cmd_edges(args) -> None:
    img, stem = _load_image(args)
    edge = canny(img, args.low, args.high)
    if edge.count == 0:
        log.warning("empty edge image")
    _write(Path(args.output) / f"{stem}_edges.pgm", write_pgm(edge.to_gray()))


def cmd_signals(args) -> None:
    img, _ = _load_image(args)
    sig = pipeline.image_signals(img, not args.raw, args.low, args.high)
    _emit(signals_to_csv(sig), args.output)


def cmd_encode(args) -> None:
    cfg = _config(args)
    if args.signals is not None:
        sig = signals_from_csv(_read_text(args.signals), args.width, args.height)
    else:
        img, _ = _load_image(args)
        sig = pipeline.image_signals(img, not args.raw, args.low, args.high)
    pair = pipeline.encode_pair(sig, cfg)
    out = Path(args.output)
    _write(out / "signals.csv", signals_to_csv(sig))
    _write(out / "x.spikes.json", pair.x.to_json() + "\n")
    _write(out / "y.spikes.json", pair.y.to_json() + "\n")


def cmd_decode(args) -> None:
    tx = SpikeTrain.from_json(_read_text(args.x_spikes))
    ty = SpikeTrain.from_json(_read_text(args.y_spikes))
    recon = CoordSignalPair(decode(tx), decode(ty), args.width, args.height)
    _emit(signals_to_csv(recon), args.output)
    if args.image is not None:
        _write(Path(args.image), write_pgm(signals_to_image(recon)))


def cmd_metrics(args) -> None:
    original = signals_from_csv(_read_text(args.signals), 1, 1)
    train = SpikeTrain.from_json(_read_text(args.spikes))
    report = pipeline.evaluate_axis(original, train, args.axis, _params(args))
    _emit(",".join(METRICS_HEADER) + "\n" + report.csv_row() + "\n", args.output)


def cmd_sweep(args) -> None:
    ds = _load_dataset(args)
    indices = pipeline.select_cohort(ds, args.samples, args.seed)
    signals = pipeline.cohort_signals(ds, indices, not args.raw, args.low, args.high)
    default_s, default_e = default_axes()
    grids = pipeline.sweep_cohort(
        signals,
        args.method,
        args.adaptive,
        args.sampling_axis or default_s,
        args.encoding_axis or default_e,
        _params(args),
    )
    out = Path(args.output)
    lines = []
    for name, grid in grids.items():
        _write(out / f"grid_{name}.csv", grid.to_csv())
        if grid.best is None:
            lines.append(f"{name}: no finite cell")
            continue
        cell = grid.best_cell
        samp = "-" if grid.best[0] is None else f"{grid.best[0]:.1f}"
        lines.append(
            f"{name}: best sampling_threshold={samp} encoding_threshold={grid.best[1]:.1f} "
            f"fitness={format_float(cell.mean.fitness)} "
            f"fitness_of_means={format_float(cell.fitness_of_means)}"
        )
    summary = "\n".join(lines) + "\n"
    _write(out / "summary.txt", summary)
    sys.stdout.write(summary)
    if all(g.best is None for g in grids.values()):
        raise NoFiniteCell("every grid cell has an undefined or infinite fitness")


def cmd_demo(args) -> None:
    ds = _load_dataset(args, need_labels=True)
    cfg = _config(args)
    out = Path(args.output)
    for rep in pipeline.digit_reports(ds, cfg, args.seed, args.low, args.high, _params(args)):
        d = out / f"digit_{rep.digit}"
        _write(d / "original.pgm", write_pgm(rep.original))
        _write(d / "edges.pgm", write_pgm(rep.edges))
        _write(d / "signals.csv", signals_to_csv(rep.signals))
        _write(d / "x.spikes.json", rep.trains.x.to_json() + "\n")
        _write(d / "y.spikes.json", rep.trains.y.to_json() + "\n")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("index", "x", "y", "x_reconstructed", "y_reconstructed"))
        for i in range(len(rep.signals)):
            w.writerow(
                (
                    i,
                    *(format_float(v) for v in (rep.signals.x[i], rep.signals.y[i])),
                    *(format_float(v) for v in (rep.reconstructed.x[i], rep.reconstructed.y[i])),
                )
            )
        _write(d / "reconstructed.csv", buf.getvalue())
        _write(d / "reconstructed.pgm", write_pgm(rep.reconstructed_image))
        for axis, report in rep.metrics.items():
            _write(
                d / f"metrics_{axis}.csv",
                ",".join(METRICS_HEADER) + "\n" + report.csv_row() + "\n",
            )
        _write(d / "source.txt", f"dataset_index={rep.index}\n")


def cmd_reduce_stat(args) -> None:
    ds = _load_dataset(args)
    indices = pipeline.select_cohort(ds, args.samples, args.seed)
    ratio = length_reduction([ds.images[i] for i in indices], args.low, args.high)
    sys.stdout.write(f"{format_float(ratio)}\n")


def _add_input(p: argparse.ArgumentParser, single: bool = True) -> None:
    g = p.add_argument_group("input")
    if single:
        g.add_argument("--image", help="binary PGM input image")
    g.add_argument("--mnist", required=not single, help="IDX image file (optionally gzipped)")
    g.add_argument("--labels", help="IDX label file (optionally gzipped)")
    if single:
        g.add_argument("--index", type=int, default=0, help="image index within --mnist")


def _add_canny(p: argparse.ArgumentParser) -> None:
    p.add_argument("--low", type=non_negative_float, default=DEFAULT_LOW)
    p.add_argument("--high", type=non_negative_float, default=DEFAULT_HIGH)


def _add_raw(p: argparse.ArgumentParser) -> None:
    p.add_argument("--raw", action="store_true", help="use all nonzero pixels, skip edge detection")


def _add_codec(p: argparse.ArgumentParser, method_default: str | None = None) -> None:
    p.add_argument("--method", choices=("sf", "tbr"), required=method_default is None,
                   default=method_default)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--sampling-threshold", type=positive_float, default=DEFAULT_SAMPLING)
    p.add_argument("--encoding-threshold", type=positive_float, default=DEFAULT_ENCODING)


def _add_fitness(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=non_negative_float, default=1.0, help="RMSE exponent in fitness")
    p.add_argument("--n", type=non_negative_float, default=1.0, help="spike-count exponent in fitness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spikelens",
        description="Encode grayscale images as X/Y temporal spike trains and measure the codec.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("edges", help="write the Canny edge image as PGM")
    _add_input(p)
    _add_canny(p)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("signals", help="extract X/Y coordinate signals as CSV")
    _add_input(p)
    _add_canny(p)
    _add_raw(p)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_signals)

    p = sub.add_parser("encode", help="encode X/Y signals into spike-train documents")
    _add_input(p)
    p.add_argument("--signals", help="signal CSV to encode instead of an image")
    p.add_argument("--width", type=positive_int, default=28)
    p.add_argument("--height", type=positive_int, default=28)
    _add_canny(p)
    _add_raw(p)
    _add_codec(p)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="reconstruct X/Y signals from spike-train documents")
    p.add_argument("--x-spikes", required=True)
    p.add_argument("--y-spikes", required=True)
    p.add_argument("--width", type=positive_int, default=28)
    p.add_argument("--height", type=positive_int, default=28)
    p.add_argument("--image", help="also rasterize the reconstruction to this PGM path")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("metrics", help="score one axis of a spike-train document")
    p.add_argument("--signals", required=True, help="original signal CSV")
    p.add_argument("--spikes", required=True, help="spike-train document for --axis")
    p.add_argument("--axis", choices=pipeline.AXES, required=True)
    _add_fitness(p)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("sweep", help="threshold grid search over a dataset cohort")
    _add_input(p, single=False)
    _add_canny(p)
    _add_raw(p)
    p.add_argument("--method", choices=("sf", "tbr"), required=True)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--sampling-axis", type=float_list, help="comma-separated thresholds")
    p.add_argument("--encoding-axis", type=float_list, help="comma-separated thresholds")
    p.add_argument("--samples", type=positive_int, default=100, help="cohort size (digit-stratified)")
    p.add_argument("--seed", type=int, default=0)
    _add_fitness(p)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("demo", help="per-digit encode/reconstruct report bundle")
    _add_input(p, single=False)
    _add_canny(p)
    _add_codec(p, method_default="sf")
    p.set_defaults(adaptive=True)
    p.add_argument("--conventional", dest="adaptive", action="store_false",
                   help="disable adaptive sampling")
    p.add_argument("--seed", type=int, default=0)
    _add_fitness(p)
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("reduce-stat", help="edge vs raw signal-length reduction")
    _add_input(p, single=False)
    _add_canny(p)
    p.add_argument("--samples", type=positive_int, default=1000, help="cohort size (digit-stratified)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reduce_stat)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "low", 0) > getattr(args, "high", float("inf")):
        parser.error("--low must not exceed --high")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"spikelens {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except SpikelensError as exc:
        print(f"spikelens {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
