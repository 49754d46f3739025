"""Empirical intensity histograms over the quantized alphabet.

A histogram is the normalized cell-count vector of a user-labeled pixel
set; total variation between two histograms is half their L1 distance,
which on a discrete alphabet equals the largest probability gap over any
subset of cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .quantize import Image, QuantizationSpec, cell_indices, features

#: Provenance tags for user-labeled pixel sets.
GT_FRACTION = "gt_fraction"
BB_FRACTION = "bb_fraction"
SEED_SQUARES = "seed_squares"
BB_PERTURBED = "bb_perturbed"
MANUAL = "manual"

_SOURCES = (GT_FRACTION, BB_FRACTION, SEED_SQUARES, BB_PERTURBED, MANUAL)


@dataclass
class PixelSet:
    """Deduplicated (row, col) coordinates labeled with one region index."""

    label: int
    pixels: np.ndarray  # (n, 2) int64, unique rows
    source: str = MANUAL

    def __post_init__(self):
        if self.source not in _SOURCES:
            raise InputError(f"unknown pixel source {self.source!r}")
        if self.label < 1:
            raise InputError(f"region label must be >= 1, got {self.label}")
        pts = np.asarray(self.pixels, dtype=np.int64).reshape(-1, 2)
        if pts.shape[0] == 0:
            raise InputError(f"pixel set for region {self.label} is empty")
        if pts.min() < 0:
            raise InputError("pixel coordinates must be non-negative")
        self.pixels = np.unique(pts, axis=0)

    @property
    def size(self) -> int:
        return int(self.pixels.shape[0])

    def check_inside(self, shape: tuple[int, int]) -> None:
        h, w = shape
        if self.pixels[:, 0].max() >= h or self.pixels[:, 1].max() >= w:
            raise InputError(
                f"region {self.label} has pixels outside the {h}x{w} image"
            )


@dataclass
class Histogram:
    """Normalized cell-mass vector plus the contributing pixel count."""

    spec: QuantizationSpec
    mass: np.ndarray = field(repr=False)
    support_count: int

    def __post_init__(self):
        m = np.asarray(self.mass, dtype=np.float64)
        if m.ndim != 1 or m.size != self.spec.alphabet_size:
            raise InputError(
                f"mass vector must have {self.spec.alphabet_size} entries"
            )
        if self.support_count < 1:
            raise InputError("histogram needs at least one contributing pixel")
        if m.min() < 0.0 or abs(m.sum() - 1.0) > 1e-9:
            raise InputError("histogram mass must be non-negative and sum to 1")
        self.mass = m


def histogram_from_cells(cells, spec: QuantizationSpec) -> Histogram:
    """Histogram of pre-quantized cell ids."""
    c = np.asarray(cells, dtype=np.int64).ravel()
    if c.size == 0:
        raise InputError("cannot build a histogram from zero pixels")
    counts = np.bincount(c, minlength=spec.alphabet_size)
    return Histogram(spec, counts / c.size, int(c.size))


def build_histogram(pixel_set: PixelSet, image: Image, spec: QuantizationSpec) -> Histogram:
    """Quantized intensity histogram of the pixels in ``pixel_set``."""
    pixel_set.check_inside(image.shape)
    feats = features(image, spec)
    vals = feats[pixel_set.pixels[:, 0], pixel_set.pixels[:, 1]]
    return histogram_from_cells(cell_indices(vals, spec), spec)


def total_variation(h1: Histogram, h2: Histogram) -> float:
    """Half the L1 distance between two histograms on the same spec."""
    if h1.spec != h2.spec:
        raise InputError("histograms use different quantization specs")
    return float(0.5 * np.abs(h1.mass - h2.mass).sum())


def min_pairwise_tv(hists: list[Histogram]) -> tuple[float, tuple[int, int]]:
    """Smallest pairwise total variation and the (1-based) pair achieving it.

    Ties break toward the lexicographically smallest pair.
    """
    m = len(hists)
    if m < 2:
        raise InputError("need at least two histograms")
    best = None
    best_pair = None
    for i in range(m):
        for j in range(i + 1, m):
            v = total_variation(hists[i], hists[j])
            if best is None or v < best:
                best = v
                best_pair = (i + 1, j + 1)
    return best, best_pair
