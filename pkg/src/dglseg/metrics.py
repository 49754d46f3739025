"""Accuracy scoring, simulated refinement curves, and report aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .pipeline import SegmentationResult
from .slic import SuperpixelPartition


def pixel_accuracy(pred: np.ndarray, gt: np.ndarray, exclusion: float = 0.0) -> float:
    """Fraction of reference-labeled pixels predicted correctly.

    With ``exclusion`` e > 0, up to floor(e * labeled) mislabeled pixels
    are forgiven, taken from the worst-scoring reference regions first;
    forgiven pixels leave both numerator and denominator. This discounts
    systematic oversegmentation losses without ever rewarding them.
    """
    p = np.asarray(pred)
    g = np.asarray(gt)
    if p.shape != g.shape:
        raise InputError(f"shape mismatch: {p.shape} vs {g.shape}")
    if not 0.0 <= exclusion < 0.5:
        raise InputError("exclusion fraction must lie in [0, 0.5)")
    labeled = g > 0
    total = int(labeled.sum())
    if total == 0:
        raise InputError("reference field labels no pixels")
    correct_mask = (p == g) & labeled
    correct = int(correct_mask.sum())
    if exclusion == 0.0:
        return correct / total

    budget = int(math.floor(exclusion * total))
    regions = np.unique(g[labeled])
    stats = []
    for r in regions:
        r_mask = g == r
        tot_r = int(r_mask.sum())
        cor_r = int((correct_mask & r_mask).sum())
        stats.append((cor_r / tot_r, int(r), tot_r - cor_r))
    stats.sort()  # worst-covered regions first, ties by label
    dropped = 0
    for _, _, wrong_r in stats:
        if dropped >= budget:
            break
        dropped += min(budget - dropped, wrong_r)
    return correct / (total - dropped)


def majority_labels(
    partition: SuperpixelPartition, gt: np.ndarray, n_regions: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-superpixel reference-majority label and the full count matrix.

    Returns (majority (K',), counts (K', M+1)) where counts[:, 0] holds
    unlabeled pixels. Superpixels with no labeled pixels get majority 0;
    label ties break toward the smaller label.
    """
    g = np.asarray(gt)
    if g.shape != partition.shape:
        raise InputError("reference field does not match the partition")
    k = partition.n_superpixels
    flat = partition.assignment.ravel().astype(np.int64) * (n_regions + 1) + g.ravel()
    counts = np.bincount(flat, minlength=k * (n_regions + 1)).reshape(k, n_regions + 1)
    region_counts = counts[:, 1:]
    majority = np.where(
        region_counts.sum(axis=1) > 0, region_counts.argmax(axis=1) + 1, 0
    )
    return majority, counts


def genie_refinement_curve(
    result: SegmentationResult, gt: np.ndarray, click_cost: int | None = None
) -> list[tuple[int, float]]:
    """Simulated optimal user corrections, costed in clicks.

    Every superpixel whose label disagrees with its reference majority is
    a correction candidate; candidates apply in decreasing order of pixel
    gain, each charging ``click_cost`` clicks. The curve starts at the
    uncorrected accuracy and ends at the majority-label ceiling. Nothing
    is mutated; the corrections are only simulated.
    """
    cost = result.click_cost if click_cost is None else click_cost
    g = np.asarray(gt)
    majority, counts = majority_labels(result.partition, g, result.n_regions)
    total = int((g > 0).sum())
    if total == 0:
        raise InputError("reference field labels no pixels")
    cur = result.superpixel_labels
    region_counts = counts[:, 1:]
    cur_correct = region_counts[np.arange(len(cur)), cur - 1]
    best_correct = np.where(majority > 0, region_counts.max(axis=1), 0)
    gains = best_correct - cur_correct
    candidates = sorted(
        ((int(gains[k]), int(k)) for k in np.flatnonzero(gains > 0)),
        key=lambda t: (-t[0], t[1]),
    )
    correct = int(cur_correct.sum())
    curve = [(0, correct / total)]
    clicks = 0
    for gain, _ in candidates:
        correct += gain
        clicks += cost
        curve.append((clicks, correct / total))
    return curve


def clicks_to_reach(curve: list[tuple[int, float]], target: float) -> int:
    """Clicks at the first curve point reaching ``target`` accuracy.

    Falls back to the full curve's click total when the ceiling stays
    below the target.
    """
    for clicks, acc in curve:
        if acc >= target:
            return clicks
    return curve[-1][0]


def boundary_recall(
    partition: SuperpixelPartition, gt: np.ndarray, tolerance: int = 2
) -> float:
    """Fraction of reference boundary pixels near a superpixel boundary."""
    g = np.asarray(gt)
    if g.shape != partition.shape:
        raise InputError("reference field does not match the partition")
    gt_edges = _edges(g)
    if not gt_edges.any():
        return 1.0
    sp_edges = _edges(partition.assignment)
    from scipy.ndimage import binary_dilation

    grown = binary_dilation(sp_edges, iterations=tolerance) if tolerance else sp_edges
    return float(grown[gt_edges].mean())


def _edges(field_2d: np.ndarray) -> np.ndarray:
    e = np.zeros(field_2d.shape, dtype=bool)
    e[:-1, :] |= field_2d[:-1, :] != field_2d[1:, :]
    e[:, :-1] |= field_2d[:, :-1] != field_2d[:, 1:]
    return e


# ---------------------------------------------------------------------------
# Benchmark records and aggregation


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one (image, annotation, regime) benchmark run."""

    image: str
    annotation: str
    regime: str
    parameter: float | None
    rng_seed: int
    n_regions: int
    n_superpixels: int
    accuracy: float
    clicks_to_99: int
    refinement_ceiling: float


@dataclass(frozen=True)
class RegimeAggregate:
    regime: str
    parameter: float | None
    n_runs: int
    mean_accuracy: float
    stdev_accuracy: float
    mean_clicks_to_99: float


@dataclass
class AccuracyReport:
    """Per-run records plus per-regime aggregates."""

    records: list[RunRecord]
    aggregates: list[RegimeAggregate] = field(default_factory=list)

    def aggregate_for(self, regime: str, parameter: float | None = None) -> RegimeAggregate:
        for agg in self.aggregates:
            if agg.regime == regime and (parameter is None or agg.parameter == parameter):
                return agg
        raise InputError(f"no aggregate for regime {regime!r} parameter {parameter!r}")


def aggregate(records: list[RunRecord]) -> AccuracyReport:
    """Group records by (regime, parameter); unweighted mean and stdev."""
    if not records:
        raise InputError("nothing to aggregate")
    groups: dict[tuple[str, float | None], list[RunRecord]] = {}
    for rec in records:
        groups.setdefault((rec.regime, rec.parameter), []).append(rec)
    aggs = []
    for (regime, parameter), recs in sorted(
        groups.items(), key=lambda kv: (kv[0][0], kv[0][1] if kv[0][1] is not None else -1.0)
    ):
        accs = np.array([r.accuracy for r in recs], dtype=np.float64)
        clicks = np.array([r.clicks_to_99 for r in recs], dtype=np.float64)
        aggs.append(
            RegimeAggregate(
                regime,
                parameter,
                len(recs),
                float(accs.mean()),
                float(accs.std()),
                float(clicks.mean()),
            )
        )
    return AccuracyReport(list(records), aggs)
