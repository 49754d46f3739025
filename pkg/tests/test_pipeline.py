import numpy as np
import pytest

from dglseg import (
    GtFraction,
    Image,
    InputError,
    PixelSet,
    QuantizationSpec,
    RegionAnnotation,
    classify,
    pixel_accuracy,
    relabel_superpixel,
    segment,
    training_sets,
)

GRAY2 = QuantizationSpec("GRAY", (0,), (2,))


def bernoulli_image(rng, h=64, w=64, p=0.9):
    """Left half mostly dark cell, right half mostly bright cell."""
    field = np.ones((h, w), dtype=int)
    field[:, w // 2:] = 2
    dark = rng.random((h, w)) < p
    vals = np.where(field == 1, np.where(dark, 0.25, 0.75), np.where(dark, 0.75, 0.25))
    return Image(vals[:, :, None]), RegionAnnotation(field, 2)


class TestSegment:
    def test_two_region_bernoulli(self):
        accs = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            img, ann = bernoulli_image(rng)
            sets = training_sets(ann, GtFraction(100.0), rng_seed=seed)
            res = segment(img, sets, spec=GRAY2, n_superpixels=64)
            accs.append(pixel_accuracy(res.pixel_labels, ann.label_field))
        assert np.mean(accs) >= 0.95

    def test_identical_training_sets_tie_to_one(self):
        rng = np.random.default_rng(0)
        img, ann = bernoulli_image(rng)
        pts = ann.region_pixels(1)[:50]
        sets = [PixelSet(1, pts), PixelSet(2, pts)]
        res = segment(img, sets, spec=GRAY2, n_superpixels=16)
        assert (res.superpixel_labels == 1).all()

    def test_disjoint_point_masses(self):
        # all pixels drawn from region 2's cell: every superpixel labels 2
        img = Image(np.full((16, 16, 1), 0.75))
        sets = [PixelSet(1, [(0, 0)]), PixelSet(2, [(0, 15)])]
        img.data[0, 0] = 0.25  # region 1's training pixel sits in cell 0
        res = segment(img, sets, spec=GRAY2, n_superpixels=4)
        assert (res.superpixel_labels == 2).all()

    def test_pixel_labels_derive_from_superpixels(self):
        rng = np.random.default_rng(1)
        img, ann = bernoulli_image(rng)
        res = segment(img, training_sets(ann, GtFraction(100.0)), spec=GRAY2, n_superpixels=32)
        assert np.array_equal(
            res.pixel_labels, res.superpixel_labels[res.partition.assignment]
        )
        assert set(np.unique(res.superpixel_labels)) <= {1, 2}

    def test_deterministic(self):
        rng = np.random.default_rng(2)
        img, ann = bernoulli_image(rng)
        sets = training_sets(ann, GtFraction(50.0), rng_seed=4)
        r1 = segment(img, sets, spec=GRAY2, n_superpixels=32)
        r2 = segment(img, sets, spec=GRAY2, n_superpixels=32)
        assert np.array_equal(r1.superpixel_labels, r2.superpixel_labels)
        assert np.array_equal(r1.partition.assignment, r2.partition.assignment)

    def test_batched_matches_per_superpixel_classify(self):
        rng = np.random.default_rng(3)
        img, ann = bernoulli_image(rng, 32, 32)
        res = segment(img, training_sets(ann, GtFraction(100.0)), spec=GRAY2, n_superpixels=16)
        from dglseg.quantize import cell_indices, features

        cells = cell_indices(features(img, res.histograms[0].spec), res.histograms[0].spec)
        for k, members in enumerate(res.partition.member_lists):
            stats = classify(cells[members[:, 0], members[:, 1]], res.family, res.table)
            assert stats.chosen_label == res.superpixel_labels[k]
            assert np.allclose(stats.scores, res.stats[k].scores)

    def test_single_region_rejected(self):
        img = Image(np.zeros((8, 8, 1)))
        with pytest.raises(InputError):
            segment(img, [PixelSet(1, [(0, 0)])], spec=GRAY2)

    def test_wrong_label_range_rejected(self):
        img = Image(np.zeros((8, 8, 1)))
        sets = [PixelSet(2, [(0, 0)]), PixelSet(3, [(1, 1)])]
        with pytest.raises(InputError):
            segment(img, sets, spec=GRAY2)


class TestRelabel:
    def make_result(self):
        rng = np.random.default_rng(5)
        img, ann = bernoulli_image(rng)
        sets = training_sets(ann, GtFraction(100.0))
        return segment(img, sets, spec=GRAY2, n_superpixels=16), ann

    def test_same_label_only_costs_clicks(self):
        res, _ = self.make_result()
        before = res.superpixel_labels.copy()
        relabel_superpixel(res, 0, int(before[0]))
        assert np.array_equal(res.superpixel_labels, before)
        assert res.clicks == 2
        assert res.stats[0].overridden

    def test_fixing_an_error_raises_accuracy(self):
        res, ann = self.make_result()
        relabel_superpixel(res, 3, 3 - res.superpixel_labels[3])  # break it
        broken = pixel_accuracy(res.pixel_labels, ann.label_field)
        relabel_superpixel(res, 3, 3 - res.superpixel_labels[3])  # fix it
        fixed = pixel_accuracy(res.pixel_labels, ann.label_field)
        assert fixed > broken
        assert res.clicks == 4

    def test_last_write_wins(self):
        res, _ = self.make_result()
        relabel_superpixel(res, 2, 1)
        relabel_superpixel(res, 2, 2)
        assert res.superpixel_labels[2] == 2

    def test_only_target_changes(self):
        res, _ = self.make_result()
        before = res.superpixel_labels.copy()
        target_label = 3 - before[7]
        relabel_superpixel(res, 7, target_label)
        diff = np.flatnonzero(res.superpixel_labels != before)
        assert diff.tolist() == [7]
        assert np.array_equal(
            res.pixel_labels, res.superpixel_labels[res.partition.assignment]
        )

    def test_bad_ids_rejected(self):
        res, _ = self.make_result()
        with pytest.raises(InputError):
            relabel_superpixel(res, 10**6, 1)
        with pytest.raises(InputError):
            relabel_superpixel(res, 0, 9)
