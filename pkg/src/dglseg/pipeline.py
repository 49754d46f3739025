"""End-to-end segmentation: training sets -> histograms -> per-superpixel test.

The nominal histograms, comparison sets, and mass table are built once per
run; each superpixel is then labeled independently, so the per-pair
membership of every pixel is computed in one vectorized pass and reduced
per superpixel.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .dgl import (
    DecisionStats,
    NominalTable,
    ScheffeFamily,
    build_nominal_table,
    build_scheffe_sets,
)
from .errors import InputError
from .histograms import Histogram, PixelSet, histogram_from_cells
from .quantize import Image, QuantizationSpec, cell_indices, features
from .slic import DEFAULT_COMPACTNESS, SuperpixelPartition, slic

DEFAULT_CLICK_COST = 2


@dataclass
class SegmentationResult:
    """Superpixel partition plus the label decided for each superpixel."""

    partition: SuperpixelPartition
    superpixel_labels: np.ndarray  # (K',) int, values in [1, M]
    stats: list[DecisionStats]
    histograms: list[Histogram] = field(repr=False)
    family: ScheffeFamily = field(repr=False)
    table: NominalTable = field(repr=False)
    config: dict = field(default_factory=dict)
    clicks: int = 0
    click_cost: int = DEFAULT_CLICK_COST

    @property
    def n_regions(self) -> int:
        return len(self.histograms)

    @property
    def pixel_labels(self) -> np.ndarray:
        """(H, W) label field derived from the superpixel labels."""
        return self.superpixel_labels[self.partition.assignment]


def segment(
    image: Image,
    training_sets: list[PixelSet],
    spec: QuantizationSpec | None = None,
    n_superpixels: int = 500,
    compactness: float = DEFAULT_COMPACTNESS,
    partition: SuperpixelPartition | None = None,
    click_cost: int = DEFAULT_CLICK_COST,
) -> SegmentationResult:
    """Segment an image given one labeled pixel set per region.

    Passing a precomputed ``partition`` (e.g. when re-running with
    different inputs on the same image) skips the superpixel step; it must
    match the image dimensions.
    """
    spec = spec or QuantizationSpec()
    m = len(training_sets)
    if m < 2:
        raise InputError("segmentation needs at least two labeled regions")
    labels = sorted(ps.label for ps in training_sets)
    if labels != list(range(1, m + 1)):
        raise InputError(f"training sets must carry labels 1..{m}, got {labels}")
    sets = sorted(training_sets, key=lambda ps: ps.label)
    for ps in sets:
        ps.check_inside(image.shape)

    t0 = time.perf_counter()
    feats = features(image, spec)
    if partition is None:
        partition = slic(feats, n_superpixels, compactness)
    elif partition.shape != image.shape:
        raise InputError("precomputed partition does not match the image")

    cell_map = cell_indices(feats, spec)  # (H, W)
    hists = [
        histogram_from_cells(cell_map[ps.pixels[:, 0], ps.pixels[:, 1]], spec)
        for ps in sets
    ]
    family = build_scheffe_sets(hists)
    table = build_nominal_table(hists, family)
    sp_labels, scores, measures = _classify_partition(cell_map, partition, family, table)
    stats = [
        DecisionStats(int(sp_labels[k]), scores[k], measures[k])
        for k in range(partition.n_superpixels)
    ]
    elapsed = time.perf_counter() - t0
    config = {
        "color_space": spec.color_space,
        "channel_selection": list(spec.channel_selection),
        "bins_per_channel": list(spec.bins_per_channel),
        "n_superpixels_requested": n_superpixels,
        "n_superpixels_actual": partition.n_superpixels,
        "compactness": compactness,
        "click_cost": click_cost,
        "n_regions": m,
        "sources": [ps.source for ps in sets],
        "elapsed_seconds": elapsed,
    }
    return SegmentationResult(
        partition, sp_labels, stats, hists, family, table, config,
        clicks=0, click_cost=click_cost,
    )


def _classify_partition(
    cell_map: np.ndarray,
    partition: SuperpixelPartition,
    family: ScheffeFamily,
    table: NominalTable,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized per-superpixel decision; one pass over pixels per pair set."""
    flat_cells = cell_map.ravel()
    flat_assign = partition.assignment.ravel()
    k = partition.n_superpixels
    counts = np.bincount(flat_assign, minlength=k).astype(np.float64)
    mu = np.empty((k, len(family.pairs)), dtype=np.float64)
    for r in range(len(family.pairs)):
        member = family.masks[r][flat_cells]
        mu[:, r] = np.bincount(flat_assign, weights=member, minlength=k) / counts
    dev = np.abs(table.values[None, :, :] - mu[:, None, :])  # (K', M, pairs)
    scores = dev.max(axis=2)
    labels = np.argmin(scores, axis=1).astype(np.int64) + 1
    return labels, scores, mu


def relabel_superpixel(result: SegmentationResult, k: int, new_label: int) -> SegmentationResult:
    """Override one superpixel's label (in place) and charge the click cost."""
    if not 0 <= k < result.partition.n_superpixels:
        raise InputError(f"superpixel id {k} outside [0, {result.partition.n_superpixels})")
    if not 1 <= new_label <= result.n_regions:
        raise InputError(f"label {new_label} outside [1, {result.n_regions}]")
    result.superpixel_labels[k] = new_label
    result.stats[k].chosen_label = new_label
    result.stats[k].overridden = True
    result.clicks += result.click_cost
    return result
