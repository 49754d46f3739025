import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dglseg import QuantizationSpec, features, generate_natural, slic
from dglseg.dataset import (
    DatasetManifest,
    load_image,
    load_label_map,
    save_image,
    save_label_map,
)

ACCEPTANCE_SPEC = QuantizationSpec("HSV", (0, 1), (1024, 1024))
ACCEPTANCE_K = 500
N_ACCEPTANCE_IMAGES = 10


@pytest.fixture(scope="session")
def natural_corpus(tmp_path_factory):
    """Ten annotated photograph-like images at 321x481, via the PNG path."""
    root = tmp_path_factory.mktemp("natural_corpus")
    entries = []
    for i in range(N_ACCEPTANCE_IMAGES):
        m = 3 + i % 3
        image, annotation = generate_natural(m, 481, 321, seed=i)
        img_name = f"img_{i:02d}.png"
        gt_name = f"img_{i:02d}_gt.png"
        save_image(image, root / img_name)
        save_label_map(annotation.label_field, root / gt_name)
        entries.append((img_name, [gt_name]))
    manifest = DatasetManifest(entries, name="acceptance-natural")
    manifest.root = root
    manifest.save(root / "manifest.json")
    records = []
    for idx in range(len(entries)):
        image = load_image(manifest.image_path(idx))
        annotation = load_label_map(manifest.annotation_paths(idx)[0])
        records.append(
            {"name": entries[idx][0], "image": image, "annotation": annotation}
        )
    return {"manifest": manifest, "records": records, "root": root}


@pytest.fixture(scope="session")
def natural_partitions(natural_corpus):
    """K=500 superpixel partition per corpus image (shared across criteria)."""
    parts = []
    for rec in natural_corpus["records"]:
        feats = features(rec["image"], ACCEPTANCE_SPEC)
        parts.append(slic(feats, ACCEPTANCE_K))
    return parts
