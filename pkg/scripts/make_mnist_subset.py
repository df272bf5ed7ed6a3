"""Rebuild tests/data/mnist5k-*.gz from the 5000-digit MNIST CSV shipped in mlxtend.

Usage: python scripts/make_mnist_subset.py path/to/mlxtend-*.whl
(``pip download --no-deps mlxtend`` fetches the wheel.)
"""
from __future__ import annotations

import gzip
import io
import struct
import sys
import zipfile
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"


def main(wheel: str) -> None:
    with zipfile.ZipFile(wheel) as zf:
        raw = gzip.decompress(zf.read("mlxtend/data/data/mnist_5k.csv.gz"))
    table = np.loadtxt(io.BytesIO(raw), delimiter=",", dtype=np.int64)
    images = table[:, :784].astype(np.uint8)
    labels = table[:, 784].astype(np.uint8)
    n = len(images)
    # mtime=0 keeps the archives byte-reproducible
    with gzip.GzipFile(OUT / "mnist5k-images-idx3-ubyte.gz", "wb", mtime=0) as fh:
        fh.write(struct.pack(">IIII", 2051, n, 28, 28) + images.tobytes())
    with gzip.GzipFile(OUT / "mnist5k-labels-idx1-ubyte.gz", "wb", mtime=0) as fh:
        fh.write(struct.pack(">II", 2049, n) + labels.tobytes())


if __name__ == "__main__":
    main(sys.argv[1])
