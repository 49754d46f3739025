"""Color-space handling and quantization onto a discrete product alphabet.

Intensities are normalized floats in [0, 1]. A :class:`QuantizationSpec`
selects a working color space, a subset of its channels, and a per-channel
bin count; every pixel then maps to one cell of the product alphabet via
equidistant floor-binning (values exactly at 1.0 clamp into the top bin).
Cell ids compose row-major across the selected channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, InputError

COLOR_SPACES = ("RGB", "HSV", "GRAY")

#: Valid channel indices per color space.
_CHANNELS = {"RGB": (0, 1, 2), "HSV": (0, 1, 2), "GRAY": (0,)}


@dataclass(frozen=True)
class QuantizationSpec:
    """Working color space, channel subset, and per-channel bin counts."""

    color_space: str = "HSV"
    channel_selection: tuple[int, ...] = (0, 1)
    bins_per_channel: tuple[int, ...] = (1024, 1024)

    def __post_init__(self):
        if self.color_space not in COLOR_SPACES:
            raise ConfigError(f"unknown color space {self.color_space!r}")
        sel = tuple(int(c) for c in self.channel_selection)
        bins = tuple(int(b) for b in self.bins_per_channel)
        object.__setattr__(self, "channel_selection", sel)
        object.__setattr__(self, "bins_per_channel", bins)
        if not sel or len(sel) != len(bins):
            raise ConfigError("channel_selection and bins_per_channel must align")
        valid = _CHANNELS[self.color_space]
        if len(set(sel)) != len(sel) or any(c not in valid for c in sel):
            raise ConfigError(
                f"channel selection {sel} invalid for {self.color_space}"
            )
        if any(b < 2 for b in bins):
            raise ConfigError("every channel needs at least 2 bins")

    @property
    def n_channels(self) -> int:
        return len(self.channel_selection)

    @property
    def alphabet_size(self) -> int:
        return math.prod(self.bins_per_channel)


@dataclass
class Image:
    """Pixel grid with per-pixel intensity vectors normalized to [0, 1]."""

    data: np.ndarray  # (height, width, channels) float64

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3:
            raise InputError(f"image must be 2- or 3-dimensional, got {arr.ndim}")
        if arr.shape[2] not in (1, 3):
            raise InputError(f"image must have 1 or 3 channels, got {arr.shape[2]}")
        if arr.size == 0:
            raise InputError("image is empty")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise InputError("image intensities must lie in [0, 1]")
        self.data = arr

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def n_pixels(self) -> int:
        return self.height * self.width

    @property
    def shape(self) -> tuple[int, int]:
        return (self.height, self.width)


def rgb_to_hsv(rgb):
    """Hexcone RGB -> HSV on [0, 1] components.

    Accepts a single 3-vector or an (..., 3) array. Hue is scaled to [0, 1)
    and defaults to 0 for achromatic pixels; saturation is 0 for black.
    """
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.shape[-1] != 3:
        raise InputError("rgb_to_hsv expects 3-component pixels")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise InputError("rgb components must lie in [0, 1]")
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    mx = arr.max(axis=-1)
    mn = arr.min(axis=-1)
    chroma = mx - mn
    h = np.zeros_like(mx)
    chromatic = chroma > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        mask = chromatic & (mx == r)
        h = np.where(mask, np.mod((g - b) / chroma, 6.0), h)
        mask = chromatic & (mx == g) & (mx != r)
        h = np.where(mask, (b - r) / chroma + 2.0, h)
        mask = chromatic & (mx == b) & (mx != r) & (mx != g)
        h = np.where(mask, (r - g) / chroma + 4.0, h)
    h = np.mod(h / 6.0, 1.0)
    s = np.where(mx > 0, np.divide(chroma, mx, out=np.zeros_like(mx), where=mx > 0), 0.0)
    return np.stack([h, s, mx], axis=-1)


def hsv_to_rgb(hsv):
    """Inverse hexcone HSV -> RGB on [0, 1] components."""
    arr = np.asarray(hsv, dtype=np.float64)
    if arr.shape[-1] != 3:
        raise InputError("hsv_to_rgb expects 3-component pixels")
    h, s, v = arr[..., 0], arr[..., 1], arr[..., 2]
    h6 = np.mod(h, 1.0) * 6.0
    i = np.floor(h6).astype(np.int64) % 6
    f = h6 - np.floor(h6)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def features(image: Image, spec: QuantizationSpec) -> np.ndarray:
    """Convert an image to the spec's working space and select its channels.

    Returns an (H, W, d') float array. Grayscale conversion of RGB uses
    Rec. 601 luma.
    """
    data = image.data
    cs = spec.color_space
    if cs == "GRAY":
        if image.channels == 1:
            working = data
        else:
            luma = 0.299 * data[..., 0] + 0.587 * data[..., 1] + 0.114 * data[..., 2]
            working = luma[..., None]
    elif cs in ("RGB", "HSV"):
        if image.channels != 3:
            raise InputError(f"{cs} working space needs a 3-channel image")
        working = data if cs == "RGB" else rgb_to_hsv(data)
    else:  # pragma: no cover - rejected by spec validation
        raise ConfigError(cs)
    return working[..., list(spec.channel_selection)]


def cell_indices(values, spec: QuantizationSpec) -> np.ndarray:
    """Vectorized cell ids for (..., d') intensity vectors in [0, 1]."""
    v = np.asarray(values, dtype=np.float64)
    if v.shape[-1] != spec.n_channels:
        raise InputError(
            f"expected {spec.n_channels}-channel intensities, got {v.shape[-1]}"
        )
    ids = np.zeros(v.shape[:-1], dtype=np.int64)
    for k, bins in enumerate(spec.bins_per_channel):
        b = np.clip(np.floor(v[..., k] * bins).astype(np.int64), 0, bins - 1)
        ids = ids * bins + b
    return ids


def cell_index(intensity, spec: QuantizationSpec) -> int:
    """Cell id of one intensity vector. See :func:`cell_indices`."""
    v = np.asarray(intensity, dtype=np.float64).reshape(-1)
    if v.size != spec.n_channels:
        raise InputError(f"expected {spec.n_channels} components, got {v.size}")
    if v.min() < 0.0 or v.max() > 1.0:
        raise InputError("intensity components must lie in [0, 1]")
    return int(cell_indices(v, spec))


def reduce_alphabet(spec: QuantizationSpec, pixel_budget: int) -> QuantizationSpec:
    """Shrink the alphabet to at most ``pixel_budget`` cells.

    Bin counts are replaced by equal per-channel counts, the floor of the
    d'-th root of the budget. A spec already within budget is returned
    unchanged.
    """
    if pixel_budget < 2:
        raise ConfigError("pixel budget must be at least 2")
    if spec.alphabet_size <= pixel_budget:
        return spec
    d = spec.n_channels
    b = int(round(pixel_budget ** (1.0 / d)))
    while b > 1 and b**d > pixel_budget:
        b -= 1
    while (b + 1) ** d <= pixel_budget:
        b += 1
    if b < 2:
        raise ConfigError(
            f"budget {pixel_budget} cannot grant 2 bins on {d} channels"
        )
    return replace(spec, bins_per_channel=(b,) * d)
