"""Static image to temporal spike train encoding via edge detection and
adaptive-sampling SF/TBR codecs."""

from .codec import (
    AdaptiveSample,
    EncodingConfig,
    Method,
    SpikeTrain,
    adaptive_decode,
    adaptive_resample,
    decode,
    encode,
    sf_encode,
    tbr_encode,
    temporal_decode,
)
from .dataset_io import GrayImage, IdxDataset, load_idx_dataset, read_pgm, write_pgm
from .edges import EdgeImage, canny
from .metrics import FitnessParams, MetricsReport, afr, evaluate, fitness, rmse, snr, spike_count
from .signals import CoordSignalPair, extract_coordinates, length_reduction, signals_to_image
from .sweep import SweepGrid, default_axes, grid_sweep

__version__ = "0.1.0"
