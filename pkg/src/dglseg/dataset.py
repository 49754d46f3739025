"""Image and label-map IO plus dataset manifests.

Images load from 8-bit PNG/PPM/PGM into normalized float intensities.
Annotations use a neutral label-map format: an 8-bit single-channel
PNG/PGM whose value 0 means unlabeled and values >= 1 are region ids;
ids are remapped to a contiguous 1..M range in order of first appearance.
"""

from __future__ import annotations

import io
import json
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import DatasetError, InputError
from .inputs import RegionAnnotation
from .quantize import Image

log = logging.getLogger(__name__)

#: Palette used when writing indexed label maps; index = label value.
_LABEL_COLORS = [
    (0, 0, 0), (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
]


def _open(source) -> PILImage.Image:
    try:
        if isinstance(source, (bytes, bytearray)):
            img = PILImage.open(io.BytesIO(source))
        else:
            img = PILImage.open(source)
        img.load()
        return img
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        name = "<bytes>" if isinstance(source, (bytes, bytearray)) else str(source)
        raise DatasetError(f"cannot decode image {name}: {exc}") from exc


def load_image(source) -> Image:
    """Decode a PNG/PPM/PGM file (path or bytes) into a normalized Image."""
    img = _open(source)
    if img.mode in ("L", "I;16", "I"):
        arr = np.asarray(img.convert("L"), dtype=np.float64)[:, :, None]
    else:
        arr = np.asarray(img.convert("RGB"), dtype=np.float64)
    return Image(arr / 255.0)


def load_label_map(source) -> RegionAnnotation:
    """Decode a label map; remap raw ids to contiguous 1..M, warn if changed."""
    img = _open(source)
    if img.mode not in ("L", "P", "1", "I;16", "I"):
        raise DatasetError(
            f"label maps must be single-channel, got mode {img.mode!r}"
        )
    if img.mode == "P":
        # Palette indices ARE the labels; converting would map through
        # the palette colors instead.
        raw = np.asarray(img, dtype=np.int64)
    else:
        raw = np.asarray(img.convert("I"), dtype=np.int64)
    if raw.max() > 255:
        raise DatasetError("label maps support at most 255 regions")
    present = np.unique(raw[raw > 0])
    if present.size == 0:
        raise DatasetError("label map is entirely unlabeled")
    if np.array_equal(present, np.arange(1, present.size + 1)):
        # Already contiguous from 1; keep values so save/load round-trips.
        return RegionAnnotation(raw, int(present.size))
    # Otherwise remap in order of first appearance (raster order).
    flat = raw.ravel()
    nonzero = flat[flat > 0]
    _, first_pos = np.unique(nonzero, return_index=True)
    ordered = nonzero[np.sort(first_pos)]
    remap = np.zeros(raw.max() + 1, dtype=np.int32)
    for new, old in enumerate(ordered, start=1):
        remap[old] = new
    warnings.warn(
        f"label values {ordered.tolist()} remapped to 1..{ordered.size}",
        stacklevel=2,
    )
    return RegionAnnotation(remap[raw], int(ordered.size))


def save_label_map(labels: np.ndarray, path) -> None:
    """Write a label field as an 8-bit indexed PNG (palette index = label)."""
    arr = np.asarray(labels)
    if arr.min() < 0 or arr.max() > 255:
        raise InputError("label values must fit in [0, 255]")
    img = PILImage.fromarray(arr.astype(np.uint8), mode="P")
    palette = []
    for i in range(256):
        palette.extend(_LABEL_COLORS[i % len(_LABEL_COLORS)] if i else (0, 0, 0))
    img.putpalette(palette)
    img.save(path, format="PNG")


def save_image(image: Image, path) -> None:
    """Write a normalized image back to 8-bit PNG."""
    arr = np.clip(np.rint(image.data * 255.0), 0, 255).astype(np.uint8)
    if arr.shape[2] == 1:
        PILImage.fromarray(arr[:, :, 0], mode="L").save(path, format="PNG")
    else:
        PILImage.fromarray(arr, mode="RGB").save(path, format="PNG")


@dataclass
class DatasetManifest:
    """Images paired with one or more annotation label maps."""

    entries: list[tuple[str, list[str]]]
    name: str = "dataset"
    notes: str = ""
    root: Path = field(default_factory=Path)

    def __post_init__(self):
        if not self.entries:
            raise DatasetError("manifest lists no entries")
        for image_path, annotations in self.entries:
            if not annotations:
                raise DatasetError(f"{image_path} has no annotations")

    def image_path(self, entry_index: int) -> Path:
        return self.root / self.entries[entry_index][0]

    def annotation_paths(self, entry_index: int) -> list[Path]:
        return [self.root / a for a in self.entries[entry_index][1]]

    def validate(self) -> None:
        """Check every referenced file exists and parses."""
        for idx in range(len(self.entries)):
            load_image(self.image_path(idx))
            for ann in self.annotation_paths(idx):
                load_label_map(ann)

    @classmethod
    def load(cls, path) -> "DatasetManifest":
        path = Path(path)
        try:
            payload = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DatasetError(f"cannot read manifest {path}: {exc}") from exc
        entries = [
            (e["image"], list(e["annotations"])) for e in payload.get("entries", [])
        ]
        return cls(
            entries,
            name=payload.get("name", path.stem),
            notes=payload.get("notes", ""),
            root=path.parent,
        )

    def save(self, path) -> None:
        payload = {
            "name": self.name,
            "notes": self.notes,
            "entries": [
                {"image": img, "annotations": anns} for img, anns in self.entries
            ],
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")
