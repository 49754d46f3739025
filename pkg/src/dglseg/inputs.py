"""User-input simulation: labeled-pixel sets from reference annotations.

Training pixels for each region can come from a fraction of its mask, a
fraction of its (optionally perturbed) tight bounding box, squares around
random seed points, or explicit manual sets. Box- and seed-based sets may
spill into other regions on purpose; the resulting histograms are then
mixtures, which is exactly the robustness stress the test is meant to
absorb.

Randomness uses numpy's default PCG64 generator. Each region draws from
its own stream seeded with ``rng_seed XOR region_label``, so per-region
generation is order-independent and reproducible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import InputError
from .histograms import (
    BB_FRACTION,
    BB_PERTURBED,
    GT_FRACTION,
    SEED_SQUARES,
    PixelSet,
)


@dataclass
class RegionAnnotation:
    """Per-pixel reference labels in [1, M]; 0 marks unlabeled pixels."""

    label_field: np.ndarray = field(repr=False)  # (H, W) int
    n_regions: int

    def __post_init__(self):
        lf = np.asarray(self.label_field)
        if lf.ndim != 2:
            raise InputError("label field must be 2-dimensional")
        if lf.min() < 0:
            raise InputError("label fields are non-negative")
        present = np.unique(lf[lf > 0])
        if present.size == 0:
            raise InputError("annotation labels no pixels at all")
        expected = np.arange(1, self.n_regions + 1)
        if present.size != self.n_regions or not np.array_equal(present, expected):
            raise InputError(
                f"labels must cover 1..{self.n_regions} contiguously, found {present.tolist()}"
            )
        self.label_field = lf.astype(np.int32)

    @property
    def shape(self) -> tuple[int, int]:
        return self.label_field.shape

    def region_pixels(self, label: int) -> np.ndarray:
        """(n, 2) coordinates of one region, raster order."""
        if not 1 <= label <= self.n_regions:
            raise InputError(f"region {label} outside [1, {self.n_regions}]")
        return np.argwhere(self.label_field == label)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box spanned by two diagonal corners, inclusive."""

    r1: int
    c1: int
    r2: int
    c2: int

    def __post_init__(self):
        if self.r1 > self.r2 or self.c1 > self.c2:
            raise InputError("box corners must be ordered (r1<=r2, c1<=c2)")
        if min(self.r1, self.c1) < 0:
            raise InputError("box corners must be non-negative")

    def pixel_grid(self, shape: tuple[int, int]) -> np.ndarray:
        """All (row, col) pairs inside the box, clipped to the image."""
        h, w = shape
        rows = np.arange(max(0, self.r1), min(h - 1, self.r2) + 1)
        cols = np.arange(max(0, self.c1), min(w - 1, self.c2) + 1)
        if rows.size == 0 or cols.size == 0:
            raise InputError("box lies outside the image")
        rr, cc = np.meshgrid(rows, cols, indexing="ij")
        return np.column_stack([rr.ravel(), cc.ravel()])


# ---------------------------------------------------------------------------
# Input regimes


@dataclass(frozen=True)
class GtFraction:
    """Sample f% of each region's reference pixels."""

    fraction: float

    def __post_init__(self):
        _check_fraction(self.fraction)


@dataclass(frozen=True)
class BbFraction:
    """Sample f% of the pixels inside each region's tight bounding box."""

    fraction: float

    def __post_init__(self):
        _check_fraction(self.fraction)


@dataclass(frozen=True)
class SeedSquares:
    """t random seed points per region, each grown to an l x l square."""

    points: int
    side: int = 50

    def __post_init__(self):
        if self.points < 1:
            raise InputError("need at least one seed point")
        if self.side < 1:
            raise InputError("square side must be at least 1")


@dataclass(frozen=True)
class BbPerturbed:
    """Perturb box corners by p%, then sample f% of the box pixels."""

    perturb: float
    fraction: float = 100.0

    def __post_init__(self):
        if self.perturb < 0:
            raise InputError("perturbation percentage must be non-negative")
        _check_fraction(self.fraction)


@dataclass(frozen=True)
class Manual:
    """Explicit user-provided pixel sets, passed through untouched."""

    sets: tuple[PixelSet, ...]


Regime = Union[GtFraction, BbFraction, SeedSquares, BbPerturbed, Manual]


def _check_fraction(f: float) -> None:
    if not 0.0 < f <= 100.0:
        raise InputError(f"fraction must lie in (0, 100], got {f}")


# ---------------------------------------------------------------------------
# Primitive samplers


def tight_bbox(pixels: np.ndarray) -> BoundingBox:
    """Minimal axis-aligned box enclosing the given pixels."""
    pts = np.asarray(pixels, dtype=np.int64).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise InputError("cannot bound an empty region")
    return BoundingBox(
        int(pts[:, 0].min()), int(pts[:, 1].min()),
        int(pts[:, 0].max()), int(pts[:, 1].max()),
    )


def sample_fraction(pixels: np.ndarray, fraction: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample without replacement of max(1, floor(n*f/100)) pixels."""
    _check_fraction(fraction)
    pts = np.asarray(pixels, dtype=np.int64).reshape(-1, 2)
    n = pts.shape[0]
    if n == 0:
        raise InputError("cannot sample from an empty pixel list")
    size = max(1, int(n * fraction / 100.0))
    if size >= n:
        return pts.copy()
    idx = rng.choice(n, size=size, replace=False)
    return pts[idx]


def perturb_bbox(
    box: BoundingBox,
    percent: float,
    rng: np.random.Generator,
    shape: tuple[int, int],
) -> BoundingBox:
    """Jitter each corner coordinate uniformly by up to (extent * p / 200).

    Draw order is fixed (r1, c1, r2, c2); results round to nearest integer,
    clamp to the image, and swap if the ordering inverted.
    """
    if percent < 0:
        raise InputError("perturbation percentage must be non-negative")
    h, w = shape
    half_r = (box.r2 - box.r1) * percent / 200.0
    half_c = (box.c2 - box.c1) * percent / 200.0
    r1 = rng.uniform(box.r1 - half_r, box.r1 + half_r)
    c1 = rng.uniform(box.c1 - half_c, box.c1 + half_c)
    r2 = rng.uniform(box.r2 - half_r, box.r2 + half_r)
    c2 = rng.uniform(box.c2 - half_c, box.c2 + half_c)
    r1 = int(np.clip(np.rint(r1), 0, h - 1))
    r2 = int(np.clip(np.rint(r2), 0, h - 1))
    c1 = int(np.clip(np.rint(c1), 0, w - 1))
    c2 = int(np.clip(np.rint(c2), 0, w - 1))
    if r1 > r2:
        r1, r2 = r2, r1
    if c1 > c2:
        c1, c2 = c2, c1
    return BoundingBox(r1, c1, r2, c2)


def seed_squares(
    region_pixels: np.ndarray,
    points: int,
    side: int,
    rng: np.random.Generator,
    shape: tuple[int, int],
) -> np.ndarray:
    """Union of l x l squares centered on random in-region seed points.

    For even sides the extra row/column falls below/right of the seed.
    Squares clip to the image; they may well extend past the region.
    """
    pts = np.asarray(region_pixels, dtype=np.int64).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise InputError("region has no pixels to seed from")
    if points > pts.shape[0]:
        warnings.warn(
            f"requested {points} seeds from a {pts.shape[0]}-pixel region; reducing",
            stacklevel=2,
        )
        points = pts.shape[0]
    seeds = pts[rng.choice(pts.shape[0], size=points, replace=False)]
    h, w = shape
    mask = np.zeros((h, w), dtype=bool)
    half = side // 2
    for r, c in seeds:
        r0 = max(0, r - half)
        c0 = max(0, c - half)
        r1 = min(h, r - half + side)
        c1 = min(w, c - half + side)
        mask[r0:r1, c0:c1] = True
    return np.argwhere(mask)


# ---------------------------------------------------------------------------
# Regime expansion


def training_sets(
    annotation: RegionAnnotation,
    regime: Regime,
    shape: tuple[int, int] | None = None,
    rng_seed: int = 0,
) -> list[PixelSet]:
    """Materialize one labeled pixel set per region under the given regime."""
    shape = shape or annotation.shape
    if isinstance(regime, Manual):
        sets = list(regime.sets)
        if len(sets) != annotation.n_regions:
            raise InputError(
                f"manual regime provides {len(sets)} sets for {annotation.n_regions} regions"
            )
        for ps in sets:
            ps.check_inside(shape)
        return sets

    out = []
    for label in range(1, annotation.n_regions + 1):
        rng = np.random.default_rng(rng_seed ^ label)
        region = annotation.region_pixels(label)
        if region.shape[0] == 0:
            raise InputError(f"region {label} has no reference pixels")
        if isinstance(regime, GtFraction):
            pts = sample_fraction(region, regime.fraction, rng)
            source = GT_FRACTION
        elif isinstance(regime, BbFraction):
            box_pixels = tight_bbox(region).pixel_grid(shape)
            pts = sample_fraction(box_pixels, regime.fraction, rng)
            source = BB_FRACTION
        elif isinstance(regime, BbPerturbed):
            box = perturb_bbox(tight_bbox(region), regime.perturb, rng, shape)
            pts = sample_fraction(box.pixel_grid(shape), regime.fraction, rng)
            source = BB_PERTURBED
        elif isinstance(regime, SeedSquares):
            pts = seed_squares(region, regime.points, regime.side, rng, shape)
            source = SEED_SQUARES
        else:
            raise InputError(f"unknown input regime {regime!r}")
        if pts.shape[0] == 0:
            raise InputError(f"regime produced no pixels for region {label}")
        out.append(PixelSet(label, pts, source))
    return out


def describe_regime(regime: Regime) -> tuple[str, float | None]:
    """(kind, parameter) pair used in reports and CSV output."""
    if isinstance(regime, GtFraction):
        return GT_FRACTION, regime.fraction
    if isinstance(regime, BbFraction):
        return BB_FRACTION, regime.fraction
    if isinstance(regime, SeedSquares):
        return SEED_SQUARES, float(regime.points)
    if isinstance(regime, BbPerturbed):
        return BB_PERTURBED, regime.perturb
    return "manual", None
