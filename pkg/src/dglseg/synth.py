"""Synthetic datasets with exact reference annotations.

Two generators:

* :func:`generate_synthetic` draws every pixel i.i.d. from a per-region
  palette distribution, matching the statistical model the test assumes.
  Region distributions are mixtures (1 - v) * uniform + v * point-mass on
  a region-specific palette color, so the minimum pairwise total
  variation equals v exactly.
* :func:`generate_natural` builds photograph-like images: organic region
  layouts from smoothed noise fields, per-region hue/saturation with
  texture, and a strong shared shading field on the value channel.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .errors import InputError
from .inputs import RegionAnnotation
from .quantize import Image, hsv_to_rgb


def _spread_palette(count: int) -> np.ndarray:
    """Deterministic well-separated RGB palette on a 4x4x4 bin-center grid."""
    centers = (np.arange(4) + 0.5) / 4.0
    grid = np.array(
        [(r, g, b) for r in centers for g in centers for b in centers]
    )
    chosen = [0]
    while len(chosen) < count:
        d = np.min(
            ((grid[:, None, :] - grid[chosen][None, :, :]) ** 2).sum(-1), axis=1
        )
        chosen.append(int(np.argmax(d)))
    return grid[chosen]


def _shape_mask(kind: str, h: int, w: int, center, size) -> np.ndarray:
    rr, cc = np.mgrid[0:h, 0:w]
    cy, cx = center
    sy, sx = size
    if kind == "circle":
        return ((rr - cy) / sy) ** 2 + ((cc - cx) / sx) ** 2 <= 1.0
    if kind == "diamond":
        return np.abs(rr - cy) / sy + np.abs(cc - cx) / sx <= 1.0
    if kind == "rect":
        return (np.abs(rr - cy) <= sy) & (np.abs(cc - cx) <= sx)
    raise InputError(f"unknown shape {kind!r}")


def _figure_layout(m: int, h: int, w: int, rng: np.random.Generator) -> np.ndarray:
    """Shapes on a background; one foreground region may get two components."""
    labels = np.full((h, w), m, dtype=np.int32)  # background carries label M
    n_shapes = m - 1 if m <= 2 else m  # extra shape doubles one region
    grid = int(np.ceil(np.sqrt(max(1, n_shapes))))
    slots = [(i, j) for i in range(grid) for j in range(grid)]
    rng.shuffle(slots)
    kinds = ["circle", "diamond", "rect"]
    cell_h, cell_w = h / grid, w / grid
    for s in range(n_shapes):
        label = (s % (m - 1)) + 1
        si, sj = slots[s]
        sy = cell_h * rng.uniform(0.22, 0.34)
        sx = cell_w * rng.uniform(0.22, 0.34)
        cy = (si + rng.uniform(0.4, 0.6)) * cell_h
        cx = (sj + rng.uniform(0.4, 0.6)) * cell_w
        kind = kinds[s % len(kinds)]
        labels[_shape_mask(kind, h, w, (cy, cx), (sy, sx))] = label
    return labels


def generate_synthetic(
    m: int,
    width: int,
    height: int,
    layout_seed: int = 0,
    separation: float = 1.0,
    palette_size: int | None = None,
) -> tuple[Image, RegionAnnotation]:
    """I.i.d.-texture image with per-region palette distributions.

    ``separation`` is the exact minimum pairwise total variation between
    the region distributions.
    """
    if m < 2:
        raise InputError("need at least two regions")
    if not 0.0 < separation <= 1.0:
        raise InputError("separation must lie in (0, 1]")
    rng = np.random.default_rng(layout_seed)
    labels = _figure_layout(m, height, width, rng)
    n_colors = palette_size or max(8, m)
    if n_colors < m:
        raise InputError("palette must have at least one color per region")
    palette = _spread_palette(n_colors)

    uniform = np.full(n_colors, 1.0 / n_colors)
    data = np.empty((height, width, 3), dtype=np.float64)
    for label in range(1, m + 1):
        dist = (1.0 - separation) * uniform
        dist[label - 1] += separation
        mask = labels == label
        draws = rng.choice(n_colors, size=int(mask.sum()), p=dist)
        data[mask] = palette[draws]
    return Image(data), RegionAnnotation(labels, m)


def _organic_layout(
    m: int, h: int, w: int, rng: np.random.Generator, min_fraction: float = 0.04
) -> np.ndarray | None:
    """Compact blobs with wiggly boundaries: noisy weighted Voronoi cells."""
    rr, cc = np.mgrid[0:h, 0:w]
    diag = np.hypot(h, w)
    centers = np.column_stack(
        [rng.uniform(0.15 * h, 0.85 * h, m), rng.uniform(0.15 * w, 0.85 * w, m)]
    )
    fields = np.empty((m, h, w))
    for i in range(m):
        dist = np.hypot(rr - centers[i, 0], cc - centers[i, 1]) / diag
        wobble = gaussian_filter(rng.standard_normal((h, w)), sigma=0.06 * min(h, w))
        wobble /= wobble.std() + 1e-12
        fields[i] = dist / rng.uniform(0.8, 1.3) + 0.045 * wobble
    labels = fields.argmin(axis=0).astype(np.int32) + 1
    counts = np.bincount(labels.ravel(), minlength=m + 1)[1:]
    if counts.min() < min_fraction * h * w:
        return None
    return labels


def generate_natural(
    m: int,
    width: int,
    height: int,
    seed: int = 0,
    hue_noise: float = 0.04,
    sat_noise: float = 0.10,
) -> tuple[Image, RegionAnnotation]:
    """Photograph-like image: organic regions, textured hue/saturation,
    strong shared shading on the value channel."""
    if m < 2:
        raise InputError("need at least two regions")
    rng = np.random.default_rng(seed)
    labels = None
    for attempt in range(50):
        labels = _organic_layout(m, height, width, rng)
        if labels is not None:
            break
    if labels is None:
        raise InputError(f"could not lay out {m} regions of usable size")

    # Hues evenly spaced away from the wrap-around, then shuffled per image.
    positions = (np.arange(m) + rng.uniform(0.0, 1.0)) % m
    base_h = 0.08 + 0.80 * positions / m
    rng.shuffle(base_h)
    base_s = rng.uniform(0.40, 0.85, size=m)
    base_v = rng.uniform(0.55, 0.90, size=m)

    def textured(scale: float) -> np.ndarray:
        # Mostly spatially-correlated texture: photo-like regions repeat
        # colors instead of spreading one-pixel-per-cell noise.
        fine = rng.standard_normal((height, width))
        mid = gaussian_filter(rng.standard_normal((height, width)), sigma=3.0)
        mid /= mid.std() + 1e-12
        coarse = gaussian_filter(rng.standard_normal((height, width)), sigma=10.0)
        coarse /= coarse.std() + 1e-12
        return scale * (0.05 * fine + 0.35 * mid + 0.9 * coarse)

    idx = labels - 1
    hch = base_h[idx] + textured(hue_noise)
    sch = base_s[idx] + textured(sat_noise)

    shading = gaussian_filter(rng.standard_normal((height, width)), sigma=0.35 * min(height, width))
    shading = (shading - shading.min()) / (np.ptp(shading) + 1e-12)
    vch = base_v[idx] * (0.62 + 0.38 * shading) + 0.015 * rng.standard_normal((height, width))

    # Snap all channels to photo-like granularity: surfaces occupy a
    # bounded palette instead of giving every pixel a unique color. V is
    # coarser so shading does not split the chroma palette apart after the
    # 8-bit round trip.
    hch = np.rint(np.clip(hch, 0.02, 0.98) * 256.0) / 256.0
    sch = np.rint(np.clip(sch, 0.30, 1.0) * 256.0) / 256.0
    vch = np.rint(np.clip(vch, 0.30, 1.0) * 40.0) / 40.0
    hsv = np.stack([hch, sch, vch], axis=-1)
    return Image(hsv_to_rgb(hsv)), RegionAnnotation(labels, m)
