"""Robust user-assisted multiple-region image segmentation.

The engine converts user-labeled pixels into quantized intensity
histograms, partitions the image into superpixels, and labels each
superpixel with a robust M-ary hypothesis test built on per-pair
comparison sets. Companion modules simulate the standard user-input
regimes, score accuracy and refinement cost, and expose the pipeline
through a CLI and a local HTTP service.
"""

from .dgl import (
    BoundParams,
    BoundValue,
    DecisionStats,
    NominalTable,
    ScheffeFamily,
    build_nominal_table,
    build_scheffe_sets,
    classify,
    empirical_measure,
    error_bound_alternate,
    error_bound_primary,
    min_superpixel_size,
)
from .errors import ConfigError, DatasetError, DglsegError, InputError, StateError
from .histograms import (
    Histogram,
    PixelSet,
    build_histogram,
    histogram_from_cells,
    min_pairwise_tv,
    total_variation,
)
from .inputs import (
    BbFraction,
    BbPerturbed,
    BoundingBox,
    GtFraction,
    Manual,
    RegionAnnotation,
    SeedSquares,
    perturb_bbox,
    sample_fraction,
    seed_squares,
    tight_bbox,
    training_sets,
)
from .metrics import (
    AccuracyReport,
    RunRecord,
    aggregate,
    boundary_recall,
    clicks_to_reach,
    genie_refinement_curve,
    majority_labels,
    pixel_accuracy,
)
from .pipeline import SegmentationResult, relabel_superpixel, segment
from .quantize import (
    Image,
    QuantizationSpec,
    cell_index,
    cell_indices,
    features,
    hsv_to_rgb,
    reduce_alphabet,
    rgb_to_hsv,
)
from .slic import SuperpixelPartition, slic
from .synth import generate_natural, generate_synthetic

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
