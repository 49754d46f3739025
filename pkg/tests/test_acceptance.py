"""Acceptance gate: one test per criterion, one printed verdict line each.

The heavy desk-scale computations (ten annotated photograph-like images,
K=500 superpixels, the 1024^2 chroma alphabet) are shared through
module-scoped fixtures so each criterion reads precomputed numbers.
"""

import math
import time

import numpy as np
import pytest

from dglseg import (
    BbFraction,
    BbPerturbed,
    BoundParams,
    GtFraction,
    Histogram,
    QuantizationSpec,
    build_nominal_table,
    build_scheffe_sets,
    classify,
    error_bound_alternate,
    error_bound_primary,
    genie_refinement_curve,
    generate_synthetic,
    histogram_from_cells,
    min_superpixel_size,
    pixel_accuracy,
    reduce_alphabet,
    segment,
    slic,
    total_variation,
    training_sets,
)
from dglseg.quantize import features
from conftest import ACCEPTANCE_K, ACCEPTANCE_SPEC
from oracle_utils import (
    bound_alternate,
    bound_primary,
    direct_decision,
    smallest_positive_n,
)


def verdict(num, name, ok, detail=""):
    print(f"\n[ACCEPTANCE {num:02d}] {name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


# ---------------------------------------------------------------------------
# Criterion 1: pair-set mass gap equals total variation, across alphabets


def random_histogram(rng, spec, sparse):
    if sparse:
        n = int(rng.integers(1, 4000))
        cells = rng.integers(0, spec.alphabet_size, size=n)
        return histogram_from_cells(cells, spec)
    mass = rng.exponential(size=spec.alphabet_size)
    return Histogram(spec, mass / mass.sum(), 100)


def test_criterion_1_scheffe_identity():
    t0 = time.perf_counter()
    sizes = {
        QuantizationSpec("GRAY", (0,), (2,)): 400,
        QuantizationSpec("GRAY", (0,), (16,)): 400,
        QuantizationSpec("HSV", (0, 1), (1024, 1024)): 100,
        reduce_alphabet(QuantizationSpec("HSV", (0, 1), (1024, 1024)), 321 * 481): 100,
    }
    assert sum(sizes.values()) == 1000
    rng = np.random.default_rng(2024)
    worst = 0.0
    for spec, count in sizes.items():
        for trial in range(count):
            h1 = random_histogram(rng, spec, sparse=trial % 2 == 0 and spec.alphabet_size > 16)
            h2 = random_histogram(rng, spec, sparse=trial % 3 == 0 and spec.alphabet_size > 16)
            family = build_scheffe_sets([h1, h2])
            table = build_nominal_table([h1, h2], family)
            gap = table.value(1, 1, 2) - table.value(2, 1, 2)
            worst = max(worst, abs(gap - total_variation(h1, h2)))
    elapsed = time.perf_counter() - t0
    verdict(
        1, "scheffe-identity (1000 pairs, 4 alphabet sizes)",
        worst <= 1e-9 and elapsed < 60,
        f"max deviation {worst:.2e}, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 2: decision rule equals a direct brute-force evaluation


def test_criterion_2_bruteforce_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(99)
    mismatches = 0
    for _ in range(500):
        m = int(rng.integers(2, 5))
        alphabet = int(rng.integers(2, 13))
        n = int(rng.integers(1, 9))
        spec = QuantizationSpec("GRAY", (0,), (alphabet,))
        masses = []
        for _ in range(m):
            w = rng.random(alphabet) * (rng.random(alphabet) < 0.6)
            if w.sum() == 0:
                w[int(rng.integers(alphabet))] = 1.0
            masses.append(w / w.sum())
        hists = [Histogram(spec, mm, 8) for mm in masses]
        family = build_scheffe_sets(hists)
        table = build_nominal_table(hists, family)
        cells = rng.integers(0, alphabet, size=n)
        got = classify(cells, family, table).chosen_label
        want = direct_decision([mm.tolist() for mm in masses], cells.tolist())
        mismatches += got != want
    elapsed = time.perf_counter() - t0
    verdict(
        2, "brute-force oracle equivalence (500 cases)",
        mismatches == 0 and elapsed < 60,
        f"{mismatches} mismatches, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 3: consistency and bound at M=2, |X|=4, v=0.5, alpha=1


def test_criterion_3_consistency_bound():
    t0 = time.perf_counter()
    spec = QuantizationSpec("GRAY", (0,), (4,))
    p1 = np.array([0.375, 0.375, 0.125, 0.125])
    p2 = np.array([0.125, 0.125, 0.375, 0.375])
    assert 0.5 * np.abs(p1 - p2).sum() == 0.5
    rng = np.random.default_rng(7)
    trials = 10_000
    rows = []
    for n in (16, 64, 256):
        wrong = 0
        for t in range(trials):
            train1 = histogram_from_cells(rng.choice(4, size=n, p=p1), spec)
            train2 = histogram_from_cells(rng.choice(4, size=n, p=p2), spec)
            family = build_scheffe_sets([train1, train2])
            table = build_nominal_table([train1, train2], family)
            src = t % 2
            cells = rng.choice(4, size=n, p=p1 if src == 0 else p2)
            wrong += classify(cells, family, table).chosen_label != src + 1
        err = wrong / trials
        bound = error_bound_primary(BoundParams(2, 4, n, n, 0.5)).value
        sigma = math.sqrt(max(err * (1 - err), 1e-12) / trials)
        rows.append((n, err, bound, sigma))
    elapsed = time.perf_counter() - t0
    non_increasing = rows[0][1] >= rows[1][1] >= rows[2][1]
    under_bound = all(err <= bound + 3 * sigma for _, err, bound, sigma in rows)
    detail = " ".join(f"n={n}:err={err:.4f}(bound {min(b, 999):.2f})" for n, err, b, _ in rows)
    verdict(
        3, "consistency + bound (10^4 trials)",
        non_increasing and under_bound and elapsed < 120,
        f"{detail}, {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Criterion 4: synthetic end-to-end, M=4, TV >= 0.5, K = N/64


def test_criterion_4_synthetic_end_to_end():
    t0 = time.perf_counter()
    spec = QuantizationSpec("RGB", (0, 1, 2), (4, 4, 4))
    side = 256
    accs = []
    for seed in range(10):
        image, annotation = generate_synthetic(4, side, side, layout_seed=seed, separation=0.5)
        sets = training_sets(annotation, GtFraction(100.0), annotation.shape, seed)
        result = segment(
            image, sets, spec=spec,
            n_superpixels=side * side // 64, compactness=100.0,
        )
        accs.append(pixel_accuracy(result.pixel_labels, annotation.label_field))
    elapsed = time.perf_counter() - t0
    mean_acc = float(np.mean(accs))
    verdict(
        4, "synthetic end-to-end (M=4, TV=0.5, 10 seeds)",
        mean_acc >= 0.95 and elapsed < 120,
        f"mean accuracy {mean_acc:.4f} (min {min(accs):.4f}), {elapsed:.1f}s",
    )


# ---------------------------------------------------------------------------
# Criteria 5-7 share one sweep over the natural corpus


GT_FRACTIONS = (25.0, 50.0, 75.0, 100.0)
BB_PERTURBS = (5.0, 10.0, 15.0)


@pytest.fixture(scope="module")
def natural_sweep(natural_corpus, natural_partitions):
    """Per-regime accuracies plus refinement curves over the ten images."""
    regimes = (
        [("gt", f, GtFraction(f)) for f in GT_FRACTIONS]
        + [("bb", f, BbFraction(f)) for f in GT_FRACTIONS]
        + [("bbp", p, BbPerturbed(p)) for p in BB_PERTURBS]
    )
    reduced_spec = None
    acc = {key: [] for key in [(k, p) for k, p, _ in regimes] + [("gt_reduced", 100.0)]}
    curves = {"gt": [], "bb": []}
    per_image_seconds = []
    for idx, (rec, partition) in enumerate(
        zip(natural_corpus["records"], natural_partitions)
    ):
        image, annotation = rec["image"], rec["annotation"]
        if reduced_spec is None:
            reduced_spec = reduce_alphabet(ACCEPTANCE_SPEC, image.n_pixels)
        t0 = time.perf_counter()
        for kind, param, regime in regimes:
            sets = training_sets(annotation, regime, image.shape, rng_seed=idx)
            result = segment(
                image, sets, spec=ACCEPTANCE_SPEC,
                n_superpixels=ACCEPTANCE_K, partition=partition,
            )
            acc[(kind, param)].append(
                pixel_accuracy(result.pixel_labels, annotation.label_field)
            )
            if param == 100.0 and kind in curves:
                curve = genie_refinement_curve(result, annotation.label_field)
                curves[kind].append(
                    {
                        "curve": curve,
                        "partition": result.partition,
                        "labels": result.superpixel_labels.copy(),
                        "clicks_per_correction": result.click_cost,
                    }
                )
        # alphabet-reduction rerun of the full-reference regime
        sets = training_sets(annotation, GtFraction(100.0), image.shape, rng_seed=idx)
        result = segment(
            image, sets, spec=reduced_spec,
            n_superpixels=ACCEPTANCE_K, partition=partition,
        )
        acc[("gt_reduced", 100.0)].append(
            pixel_accuracy(result.pixel_labels, annotation.label_field)
        )
        per_image_seconds.append(time.perf_counter() - t0)
    means = {key: float(np.mean(v)) for key, v in acc.items()}
    return {
        "acc": acc,
        "means": means,
        "curves": curves,
        "reduced_spec": reduced_spec,
        "per_image_seconds": per_image_seconds,
        "annotations": [rec["annotation"] for rec in natural_corpus["records"]],
    }


def test_criterion_5_natural_benchmark(natural_sweep):
    means = natural_sweep["means"]
    s_per_img = float(np.mean(natural_sweep["per_image_seconds"]))
    a_ok = 0.80 <= means[("gt", 100.0)] <= 1.0
    b_gap = abs(means[("gt", 100.0)] - means[("gt", 50.0)])
    b_ok = b_gap <= 0.07
    c_ok = all(
        means[("gt", f)] >= means[("bb", f)] - 0.02 for f in GT_FRACTIONS
    )
    d_ok = all(
        means[("bbp", hi)] <= means[("bbp", lo)] + 0.03
        for lo, hi in zip(BB_PERTURBS, BB_PERTURBS[1:])
    )
    detail = (
        f"gt100={means[('gt', 100.0)]:.4f} gt50={means[('gt', 50.0)]:.4f} "
        f"bb100={means[('bb', 100.0)]:.4f} "
        f"bbp={[round(means[('bbp', p)], 4) for p in BB_PERTURBS]} "
        f"{s_per_img:.1f}s/image"
    )
    verdict(5, "natural-subset benchmark (10 images)", a_ok and b_ok and c_ok and d_ok, detail)


def test_criterion_6_alphabet_reduction(natural_sweep):
    means = natural_sweep["means"]
    bins = natural_sweep["reduced_spec"].bins_per_channel
    delta = abs(means[("gt", 100.0)] - means[("gt_reduced", 100.0)])
    verdict(
        6, "alphabet-reduction degradation",
        delta <= 0.07 and bins == (392, 392),
        f"bins {bins}, |mean shift| {delta:.4f}",
    )


def test_criterion_7_genie_refinement(natural_sweep):
    checked = 0
    for kind in ("gt", "bb"):
        for entry, annotation in zip(natural_sweep["curves"][kind], natural_sweep["annotations"]):
            curve = entry["curve"]
            accs = [a for _, a in curve]
            assert all(b > a for a, b in zip(accs, accs[1:])), "curve not strictly increasing"
            clicks = [c for c, _ in curve]
            corrections = len(curve) - 1
            assert clicks[-1] == entry["clicks_per_correction"] * corrections
            assert entry["clicks_per_correction"] == 2
            # independent ceiling: per-superpixel majority vote via member lists
            gt = annotation.label_field
            total = int((gt > 0).sum())
            correct = 0
            for members in entry["partition"].member_lists:
                counts = np.bincount(
                    gt[members[:, 0], members[:, 1]],
                    minlength=annotation.n_regions + 1,
                )
                correct += counts[1:].max() if counts[1:].sum() else 0
            assert accs[-1] == pytest.approx(correct / total, abs=1e-12)
            checked += 1
    verdict(7, "genie refinement curves", checked == 20, f"{checked} curves verified")


# ---------------------------------------------------------------------------
# Criterion 8: bound calculators against independent arithmetic


def test_criterion_8_bound_calculators():
    rng = np.random.default_rng(31)
    worst_rel = 0.0
    cross_checks = 0
    for _ in range(20):
        m = int(rng.integers(2, 7))
        alphabet = int(rng.integers(2, 2048))
        n = int(rng.integers(4, 5000))
        n_train = int(rng.integers(4, 5000))
        v = float(rng.uniform(0.05, 1.0))
        p = BoundParams(m, alphabet, n, n_train, v)
        for got, want in (
            (error_bound_primary(p).value, bound_primary(m, alphabet, n, n_train, v)),
            (error_bound_alternate(p).value, bound_alternate(m, alphabet, n, n_train, v)),
        ):
            if math.isinf(want):
                assert math.isinf(got)
            else:
                worst_rel = max(worst_rel, abs(got - want) / max(want, 1e-300))
        n_star = min_superpixel_size(p)
        assert n_star == smallest_positive_n(m, alphabet, p.alpha, v)
        # cross-check property: n_star is the first length at which the
        # primary exponent turns positive (alpha held fixed)
        def exponent_at(nn):
            rate = p.alpha * v * v / (2.0 * (2.0 + math.sqrt(p.alpha)) ** 2)
            penalty = max(
                2.0 * math.log(m - 1) if m > 2 else 0.0, alphabet * math.log(2.0)
            )
            return nn * rate - penalty

        assert exponent_at(n_star) > 0 >= exponent_at(n_star - 1)
        cross_checks += 1
    verdict(
        8, "bound calculators (20-point grid)",
        worst_rel <= 1e-12 and cross_checks == 20,
        f"max rel dev {worst_rel:.2e}, {cross_checks} threshold cross-checks",
    )


# ---------------------------------------------------------------------------
# Criterion 9: superpixel partition contract on every acceptance image


def test_criterion_9_slic_contract(natural_corpus, natural_partitions):
    from skimage.measure import label as cc_label

    checked = 0
    for rec, partition in zip(natural_corpus["records"], natural_partitions):
        a = partition.assignment
        assert a.shape == rec["image"].shape
        assert a.min() == 0 and a.max() == partition.n_superpixels - 1
        assert np.unique(a).size == partition.n_superpixels
        comps = cc_label(a, connectivity=1, background=-1)
        assert comps.max() == partition.n_superpixels, "superpixel not 4-connected"
        assert ACCEPTANCE_K / 2 <= partition.n_superpixels <= 2 * ACCEPTANCE_K
        feats = features(rec["image"], ACCEPTANCE_SPEC)
        again = slic(feats, ACCEPTANCE_K)
        assert np.array_equal(again.assignment, a), "partition not deterministic"
        checked += 1
    verdict(9, "superpixel contract (10 images)", checked == 10, f"{checked} images checked")
