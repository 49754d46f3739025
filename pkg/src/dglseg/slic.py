"""SLIC-style superpixels: windowed local k-means over color + position.

Cluster centers start on a regular grid at spacing S = sqrt(N/K), move to
the lowest-gradient spot in their 3x3 neighborhood, then iterate
assignment within a 2S x 2S window per center using
D = sqrt(d_color^2 + (d_space / S)^2 * compactness^2). A post-pass makes
every superpixel 4-connected: stray fragments merge into their largest
adjacent superpixel, while fragments big enough to stand alone become new
superpixels. Everything is deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from skimage.measure import label as _connected_components

from .errors import InputError
from .quantize import Image

# Working color channels live in [0, 1]; scale them so the conventional
# compactness range (around 10) trades color against space as usual.
COLOR_SCALE = 100.0

DEFAULT_COMPACTNESS = 10.0
DEFAULT_ITERATIONS = 10
# Fragments smaller than (N/K) * this factor are merged, larger ones kept.
MIN_FRAGMENT_FACTOR = 0.25


@dataclass
class SuperpixelPartition:
    """Total assignment of pixels to contiguous superpixel ids [0, K')."""

    assignment: np.ndarray = field(repr=False)  # (H, W) int32
    n_superpixels: int

    def __post_init__(self):
        self.assignment = np.ascontiguousarray(self.assignment, dtype=np.int32)

    @property
    def shape(self) -> tuple[int, int]:
        return self.assignment.shape

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment.ravel(), minlength=self.n_superpixels)

    @cached_property
    def member_lists(self) -> list[np.ndarray]:
        """Per-superpixel (n_k, 2) arrays of (row, col) coordinates."""
        flat = self.assignment.ravel()
        order = np.argsort(flat, kind="stable")
        coords = np.column_stack(np.unravel_index(order, self.assignment.shape))
        bounds = np.cumsum(self.sizes)
        return np.split(coords, bounds[:-1])


def _gradient_magnitude(feats: np.ndarray) -> np.ndarray:
    g = np.zeros(feats.shape[:2], dtype=np.float64)
    pr = np.pad(feats, ((1, 1), (0, 0), (0, 0)), mode="edge")
    pc = np.pad(feats, ((0, 0), (1, 1), (0, 0)), mode="edge")
    g += ((pr[2:, :] - pr[:-2, :]) ** 2).sum(axis=-1)
    g += ((pc[:, 2:] - pc[:, :-2]) ** 2).sum(axis=-1)
    return g


def _seed_grid(h: int, w: int, k: int) -> np.ndarray:
    spacing = math.sqrt(h * w / k)
    nr = max(1, round(h / spacing))
    nc = max(1, round(w / spacing))
    while nr * nc < k:  # round-off can undershoot badly for elongated images
        if h / (nr + 1) >= w / (nc + 1):
            nr += 1
        else:
            nc += 1
    rows = ((np.arange(nr) + 0.5) * h / nr).astype(np.int64)
    cols = ((np.arange(nc) + 0.5) * w / nc).astype(np.int64)
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return np.column_stack([rr.ravel(), cc.ravel()])


def _perturb_seeds(seeds: np.ndarray, grad: np.ndarray) -> np.ndarray:
    h, w = grad.shape
    out = seeds.copy()
    for idx, (r, c) in enumerate(seeds):
        r0, r1 = max(0, r - 1), min(h, r + 2)
        c0, c1 = max(0, c - 1), min(w, c + 2)
        win = grad[r0:r1, c0:c1]
        dr, dc = np.unravel_index(np.argmin(win), win.shape)
        out[idx] = (r0 + dr, c0 + dc)
    return out


def slic(
    image,
    n_segments: int,
    compactness: float = DEFAULT_COMPACTNESS,
    n_iterations: int = DEFAULT_ITERATIONS,
) -> SuperpixelPartition:
    """Partition an image (or a (H, W[, C]) feature array) into superpixels."""
    feats = image.data if isinstance(image, Image) else np.asarray(image, dtype=np.float64)
    if feats.ndim == 2:
        feats = feats[:, :, None]
    if feats.ndim != 3:
        raise InputError("slic expects an (H, W) or (H, W, C) array")
    h, w, _ = feats.shape
    n = h * w
    if not 1 <= n_segments <= n:
        raise InputError(f"superpixel count must lie in [1, {n}]")
    if compactness <= 0:
        raise InputError("compactness must be positive")

    scaled = feats * COLOR_SCALE
    spacing = math.sqrt(n / n_segments)
    seeds = _perturb_seeds(_seed_grid(h, w, n_segments), _gradient_magnitude(scaled))
    k = len(seeds)

    centers_pos = seeds.astype(np.float64)
    centers_col = scaled[seeds[:, 0], seeds[:, 1]].astype(np.float64)
    assignment = np.full((h, w), -1, dtype=np.int32)
    dist2 = np.empty((h, w), dtype=np.float64)
    rows_flat = np.repeat(np.arange(h, dtype=np.float64), w)
    cols_flat = np.tile(np.arange(w, dtype=np.float64), h)
    spatial_weight = (compactness / spacing) ** 2

    for _ in range(n_iterations):
        assignment.fill(-1)
        dist2.fill(np.inf)
        for ki in range(k):
            cy, cx = centers_pos[ki]
            r0 = max(0, int(math.floor(cy - spacing)))
            r1 = min(h, int(math.ceil(cy + spacing)) + 1)
            c0 = max(0, int(math.floor(cx - spacing)))
            c1 = min(w, int(math.ceil(cx + spacing)) + 1)
            win = scaled[r0:r1, c0:c1]
            dc2 = ((win - centers_col[ki]) ** 2).sum(axis=-1)
            dr = np.arange(r0, r1, dtype=np.float64) - cy
            dcol = np.arange(c0, c1, dtype=np.float64) - cx
            ds2 = dr[:, None] ** 2 + dcol[None, :] ** 2
            d2 = dc2 + ds2 * spatial_weight
            view = dist2[r0:r1, c0:c1]
            better = d2 < view
            view[better] = d2[better]
            assignment[r0:r1, c0:c1][better] = ki

        flat = assignment.ravel()
        if flat.min() < 0:  # window union missed a pixel; snap to nearest seed
            missing = np.flatnonzero(flat < 0)
            for p in missing:
                r, c = divmod(int(p), w)
                d = (centers_pos[:, 0] - r) ** 2 + (centers_pos[:, 1] - c) ** 2
                flat[p] = int(np.argmin(d))
        counts = np.bincount(flat, minlength=k).astype(np.float64)
        nz = counts > 0
        sums_r = np.bincount(flat, weights=rows_flat, minlength=k)
        sums_c = np.bincount(flat, weights=cols_flat, minlength=k)
        centers_pos[nz, 0] = sums_r[nz] / counts[nz]
        centers_pos[nz, 1] = sums_c[nz] / counts[nz]
        for ch in range(scaled.shape[2]):
            sums = np.bincount(flat, weights=scaled[:, :, ch].ravel(), minlength=k)
            centers_col[nz, ch] = sums[nz] / counts[nz]

    min_size = max(1, int(n / n_segments * MIN_FRAGMENT_FACTOR))
    merged, k_actual = _enforce_connectivity(assignment, min_size)
    return SuperpixelPartition(merged, k_actual)


def _enforce_connectivity(assignment: np.ndarray, min_size: int) -> tuple[np.ndarray, int]:
    """Split each superpixel into 4-connected components; keep each id's
    largest component, promote large strays, merge small ones into the
    biggest adjacent region."""
    h, w = assignment.shape
    # background=-1: no pixel carries that id, so every component gets a label
    comps = _connected_components(assignment, connectivity=1, background=-1) - 1
    n_comp = comps.max() + 1
    flat_comps = comps.ravel()
    sizes = np.bincount(flat_comps, minlength=n_comp)
    first = np.full(n_comp, h * w, dtype=np.int64)
    np.minimum.at(first, flat_comps, np.arange(h * w))
    owner = assignment.ravel()[first]

    # Largest component per original id survives; ties keep the earlier one.
    main = {}
    for comp in range(n_comp):
        sp = int(owner[comp])
        if sp not in main or sizes[comp] > sizes[main[sp]]:
            main[sp] = comp

    region_of = np.full(n_comp, -1, dtype=np.int64)
    region_area = {}
    next_region = 0
    for comp in sorted(main.values()):
        region_of[comp] = next_region
        region_area[next_region] = int(sizes[comp])
        next_region += 1
    pending = []
    for comp in range(n_comp):
        if region_of[comp] >= 0:
            continue
        if sizes[comp] >= min_size:
            region_of[comp] = next_region
            region_area[next_region] = int(sizes[comp])
            next_region += 1
        else:
            pending.append(comp)

    neighbors = _component_adjacency(comps, n_comp)
    pending.sort(key=lambda cidx: (sizes[cidx], cidx))
    while pending:
        progressed = False
        deferred = []
        for comp in pending:
            cands = [nb for nb in neighbors[comp] if region_of[nb] >= 0]
            if not cands:
                deferred.append(comp)
                continue
            target = max(
                (region_of[nb] for nb in cands),
                key=lambda reg: (region_area[reg], -reg),
            )
            region_of[comp] = target
            region_area[target] += int(sizes[comp])
            progressed = True
        if not progressed:  # pragma: no cover - cannot happen on a connected grid
            for comp in deferred:
                region_of[comp] = 0
            deferred = []
        pending = deferred

    relabeled = region_of[comps]
    # Contiguous ids in raster order of first appearance.
    seen, inverse = np.unique(relabeled.ravel(), return_inverse=True)
    order = np.full(seen.size, -1, dtype=np.int64)
    firsts = np.full(seen.size, h * w, dtype=np.int64)
    np.minimum.at(firsts, inverse, np.arange(h * w))
    order[np.argsort(firsts, kind="stable")] = np.arange(seen.size)
    return order[inverse].reshape(h, w).astype(np.int32), int(seen.size)


def _component_adjacency(comps: np.ndarray, n_comp: int) -> list[set]:
    pairs = set()
    a, b = comps[:, :-1].ravel(), comps[:, 1:].ravel()
    diff = a != b
    pairs.update(zip(a[diff].tolist(), b[diff].tolist()))
    a, b = comps[:-1, :].ravel(), comps[1:, :].ravel()
    diff = a != b
    pairs.update(zip(a[diff].tolist(), b[diff].tolist()))
    neighbors = [set() for _ in range(n_comp)]
    for x, y in pairs:
        neighbors[x].add(y)
        neighbors[y].add(x)
    return neighbors
