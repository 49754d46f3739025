"""Benchmark orchestration over a dataset manifest.

One declarative config drives the run; it is echoed into every report for
provenance. Superpixels depend only on the image, so each image's
partition is computed once and shared across annotations and regimes.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .dataset import DatasetManifest, load_image, load_label_map
from .errors import ConfigError, DatasetError, InputError
from .inputs import (
    BbFraction,
    BbPerturbed,
    GtFraction,
    Regime,
    SeedSquares,
    describe_regime,
    training_sets,
)
from .metrics import (
    AccuracyReport,
    RunRecord,
    aggregate,
    clicks_to_reach,
    genie_refinement_curve,
    pixel_accuracy,
)
from .pipeline import segment
from .quantize import QuantizationSpec, features, reduce_alphabet
from .slic import slic

log = logging.getLogger(__name__)

RUN_CSV_FIELDS = [
    "image", "annotation", "regime", "parameter", "rng_seed", "n_regions",
    "n_superpixels", "accuracy", "clicks_to_99", "refinement_ceiling",
]
AGGREGATE_CSV_FIELDS = [
    "regime", "parameter", "n_runs", "mean_accuracy", "stdev", "mean_clicks_to_99",
]


@dataclass(frozen=True)
class BenchConfig:
    """Declarative benchmark configuration (JSON-serializable)."""

    color_space: str = "HSV"
    channel_selection: tuple[int, ...] = (0, 1)
    bins_per_channel: tuple[int, ...] = (1024, 1024)
    reduce_to_linear: bool = False
    n_superpixels: int = 500
    compactness: float = 10.0
    rng_seed: int = 0
    exclusion: float = 0.0
    click_cost: int = 2
    regimes: tuple[Regime, ...] = (GtFraction(100.0),)

    def spec(self) -> QuantizationSpec:
        return QuantizationSpec(
            self.color_space, self.channel_selection, self.bins_per_channel
        )

    def to_dict(self) -> dict:
        return {
            "color_space": self.color_space,
            "channel_selection": list(self.channel_selection),
            "bins_per_channel": list(self.bins_per_channel),
            "reduce_to_linear": self.reduce_to_linear,
            "n_superpixels": self.n_superpixels,
            "compactness": self.compactness,
            "rng_seed": self.rng_seed,
            "exclusion": self.exclusion,
            "click_cost": self.click_cost,
            "regimes": [_regime_to_dict(r) for r in self.regimes],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "BenchConfig":
        kwargs = dict(payload)
        if "channel_selection" in kwargs:
            kwargs["channel_selection"] = tuple(kwargs["channel_selection"])
        if "bins_per_channel" in kwargs:
            kwargs["bins_per_channel"] = tuple(kwargs["bins_per_channel"])
        if "regimes" in kwargs:
            kwargs["regimes"] = tuple(_regime_from_dict(r) for r in kwargs["regimes"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"bad benchmark config: {exc}") from exc

    @classmethod
    def load(cls, path) -> "BenchConfig":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _regime_to_dict(regime: Regime) -> dict:
    if isinstance(regime, GtFraction):
        return {"kind": "gt_fraction", "fraction": regime.fraction}
    if isinstance(regime, BbFraction):
        return {"kind": "bb_fraction", "fraction": regime.fraction}
    if isinstance(regime, SeedSquares):
        return {"kind": "seed_squares", "points": regime.points, "side": regime.side}
    if isinstance(regime, BbPerturbed):
        return {"kind": "bb_perturbed", "perturb": regime.perturb, "fraction": regime.fraction}
    raise ConfigError(f"cannot serialize regime {regime!r}")


def _regime_from_dict(payload: dict) -> Regime:
    kind = payload.get("kind")
    try:
        if kind == "gt_fraction":
            return GtFraction(payload["fraction"])
        if kind == "bb_fraction":
            return BbFraction(payload["fraction"])
        if kind == "seed_squares":
            return SeedSquares(payload["points"], payload.get("side", 50))
        if kind == "bb_perturbed":
            return BbPerturbed(payload["perturb"], payload.get("fraction", 100.0))
    except KeyError as exc:
        raise ConfigError(f"regime {payload!r} misses {exc}") from exc
    raise ConfigError(f"unknown regime kind {kind!r}")


def paper_grid() -> tuple[Regime, ...]:
    """The standard benchmarking grid of input regimes."""
    regimes: list[Regime] = []
    regimes += [GtFraction(f) for f in (25, 50, 75, 100)]
    regimes += [BbFraction(f) for f in (25, 50, 75, 100)]
    regimes += [SeedSquares(t) for t in (10, 15, 20)]
    regimes += [BbPerturbed(p) for p in (5, 10, 15)]
    return tuple(regimes)


def run_seed(base_seed: int, entry_index: int, annotation_index: int) -> int:
    """Per-run sampling seed; mixes indices so runs stay independent."""
    return base_seed + 10007 * entry_index + 101 * annotation_index


def run_benchmark(
    manifest: DatasetManifest,
    config: BenchConfig,
    out_dir=None,
    plot: bool = False,
) -> AccuracyReport:
    """Run every (image, annotation, regime) combination and aggregate.

    Per-image failures are logged and skipped; the run fails only when
    nothing succeeds at all.
    """
    records: list[RunRecord] = []
    failures = 0
    for entry_idx in range(len(manifest.entries)):
        image_name = manifest.entries[entry_idx][0]
        try:
            records.extend(_run_entry(manifest, config, entry_idx))
        except (DatasetError, InputError, ConfigError) as exc:
            failures += 1
            log.error("skipping %s: %s", image_name, exc)
    if not records:
        raise DatasetError("benchmark produced no successful runs")
    report = aggregate(records)
    if out_dir is not None:
        write_reports(report, config, Path(out_dir), plot=plot)
    return report


def _run_entry(manifest: DatasetManifest, config: BenchConfig, entry_idx: int):
    image = load_image(manifest.image_path(entry_idx))
    image_name = manifest.entries[entry_idx][0]
    spec = config.spec()
    if config.reduce_to_linear:
        spec = reduce_alphabet(spec, image.n_pixels)
    feats = features(image, spec)
    partition = slic(feats, config.n_superpixels, config.compactness)
    records = []
    for ann_idx, ann_path in enumerate(manifest.annotation_paths(entry_idx)):
        annotation = load_label_map(ann_path)
        if annotation.shape != image.shape:
            raise DatasetError(
                f"{ann_path} shape {annotation.shape} != image {image.shape}"
            )
        seed = run_seed(config.rng_seed, entry_idx, ann_idx)
        for regime in config.regimes:
            sets = training_sets(annotation, regime, image.shape, seed)
            result = segment(
                image,
                sets,
                spec=spec,
                n_superpixels=config.n_superpixels,
                compactness=config.compactness,
                partition=partition,
                click_cost=config.click_cost,
            )
            acc = pixel_accuracy(
                result.pixel_labels, annotation.label_field, config.exclusion
            )
            curve = genie_refinement_curve(result, annotation.label_field)
            kind, parameter = describe_regime(regime)
            records.append(
                RunRecord(
                    image=image_name,
                    annotation=manifest.entries[entry_idx][1][ann_idx],
                    regime=kind,
                    parameter=parameter,
                    rng_seed=seed,
                    n_regions=annotation.n_regions,
                    n_superpixels=partition.n_superpixels,
                    accuracy=acc,
                    clicks_to_99=clicks_to_reach(curve, 0.99),
                    refinement_ceiling=curve[-1][1],
                )
            )
    return records


def write_reports(
    report: AccuracyReport, config: BenchConfig, out_dir: Path, plot: bool = False
) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "runs.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RUN_CSV_FIELDS)
        writer.writeheader()
        for rec in report.records:
            writer.writerow({k: getattr(rec, k) for k in RUN_CSV_FIELDS})
    with open(out_dir / "aggregate.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=AGGREGATE_CSV_FIELDS)
        writer.writeheader()
        for agg in report.aggregates:
            writer.writerow(
                {
                    "regime": agg.regime,
                    "parameter": agg.parameter,
                    "n_runs": agg.n_runs,
                    "mean_accuracy": agg.mean_accuracy,
                    "stdev": agg.stdev_accuracy,
                    "mean_clicks_to_99": agg.mean_clicks_to_99,
                }
            )
    (out_dir / "config.json").write_text(json.dumps(config.to_dict(), indent=2) + "\n")
    if plot:
        plot_aggregates(report, out_dir / "aggregate.png")


def plot_aggregates(report: AccuracyReport, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    by_regime: dict[str, list] = {}
    for agg in report.aggregates:
        by_regime.setdefault(agg.regime, []).append(agg)
    for regime, aggs in sorted(by_regime.items()):
        aggs = sorted(aggs, key=lambda a: a.parameter or 0)
        xs = [a.parameter for a in aggs]
        ys = [a.mean_accuracy for a in aggs]
        errs = [a.stdev_accuracy for a in aggs]
        ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=3, label=regime)
    ax.set_xlabel("regime parameter")
    ax.set_ylabel("mean accuracy")
    ax.set_ylim(0, 1.02)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
