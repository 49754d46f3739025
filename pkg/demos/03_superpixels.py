"""Superpixel partition of a photograph-like image, with boundary overlay.

Prints the partition contract numbers (count, sizes, connectivity) and
writes the image with superpixel boundaries burned in.
"""

from pathlib import Path

import numpy as np
from skimage.measure import label as cc_label

from dglseg import QuantizationSpec, features, generate_natural, slic
from dglseg.dataset import save_image
from dglseg.quantize import Image

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

image, annotation = generate_natural(4, 481, 321, seed=3)
spec = QuantizationSpec("HSV", (0, 1), (1024, 1024))
feats = features(image, spec)

partition = slic(feats, 500, compactness=10.0)
sizes = partition.sizes
comps = cc_label(partition.assignment, connectivity=1, background=-1)

print(f"requested 500 superpixels, produced {partition.n_superpixels}")
print(f"sizes: min {sizes.min()}, median {int(np.median(sizes))}, max {sizes.max()}")
print(f"4-connected components: {comps.max()} (one per superpixel)")

# burn boundaries into the image
edges = np.zeros(partition.shape, dtype=bool)
a = partition.assignment
edges[:-1, :] |= a[:-1, :] != a[1:, :]
edges[:, :-1] |= a[:, :-1] != a[:, 1:]
overlay = image.data.copy()
overlay[edges] = (1.0, 1.0, 0.0)
save_image(Image(overlay), OUT / "superpixels.png")
save_image(image, OUT / "source.png")
print(f"wrote {OUT / 'superpixels.png'}")
