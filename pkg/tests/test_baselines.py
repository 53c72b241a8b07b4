from pathlib import Path

import numpy as np
import pytest

from timage.baselines import (
    COST_SQUARED,
    DTW,
    EUCLIDEAN,
    RP_IMAGE,
    NnModel,
    dtw_distance,
    nn1_classify,
    parse_image_path,
    run_baseline,
)
from timage.encode import EncodeConfig, batch_encode
from timage.errors import DimensionMismatch, WindowInfeasible
from timage.manifest import SC, build_manifest
from timage.ucr import TimeSeries, parse_dataset, split_paths, z_normalize

from oracles import dtw_enumerate_paths, dtw_recursive, nn1_scan


class TestDtwDistance:
    def test_identical_sequences_cost_zero(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            a = rng.standard_normal(rng.integers(1, 30))
            assert dtw_distance(a, a) == 0.0

    def test_frozen_shift_example(self):
        # one insertion aligns the step change at zero cost
        assert dtw_distance([0, 0, 1], [0, 1, 1]) == 0.0
        assert dtw_enumerate_paths([0, 0, 1], [0, 1, 1]) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            a = rng.uniform(-2, 2, size=rng.integers(1, 15))
            b = rng.uniform(-2, 2, size=rng.integers(1, 15))
            assert dtw_distance(a, b) == pytest.approx(dtw_distance(b, a), abs=1e-12)

    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            a = rng.uniform(-3, 3, size=rng.integers(1, 8))
            b = rng.uniform(-3, 3, size=rng.integers(1, 8))
            assert dtw_distance(a, b) == pytest.approx(dtw_enumerate_paths(a, b), abs=1e-12)

    def test_matches_recursive_oracle_longer(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            a = rng.uniform(-3, 3, size=rng.integers(1, 11))
            b = rng.uniform(-3, 3, size=rng.integers(1, 11))
            assert dtw_distance(a, b) == pytest.approx(dtw_recursive(a, b), abs=1e-12)

    def test_wide_window_equals_unconstrained(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            a = rng.uniform(-3, 3, size=rng.integers(2, 12))
            b = rng.uniform(-3, 3, size=rng.integers(2, 12))
            w = max(a.size, b.size)
            assert dtw_distance(a, b, window=w) == pytest.approx(dtw_distance(a, b), abs=1e-12)

    def test_window_narrower_than_length_gap_rejected(self):
        with pytest.raises(WindowInfeasible):
            dtw_distance([1, 2, 3, 4, 5], [1.0], window=2)

    def test_window_zero_is_lockstep(self):
        a = np.array([0.0, 1.0, 2.0])
        b = np.array([1.0, 1.0, 1.0])
        assert dtw_distance(a, b, window=0) == pytest.approx(2.0)

    def test_squared_cost_variant(self):
        a = np.array([0.0, 2.0])
        b = np.array([0.0, 0.0])
        # squared accumulates 0 + 4, then sqrt
        assert dtw_distance(a, b, cost=COST_SQUARED) == pytest.approx(2.0)
        assert dtw_distance(a, a, cost=COST_SQUARED) == 0.0


class TestNn1Classify:
    def _model(self, rng, n=10, dim=6, metric=EUCLIDEAN):
        items = [(rng.uniform(-1, 1, size=dim), str(rng.integers(0, 3))) for _ in range(n)]
        return NnModel(metric=metric, train_items=items)

    def test_exact_training_item_returns_it(self):
        rng = np.random.default_rng(3)
        model = self._model(rng)
        feat, label = model.train_items[4]
        got_label, dist = nn1_classify(model, feat)
        assert got_label == label
        assert dist == 0.0

    def test_tie_breaks_to_lowest_index(self):
        items = [
            (np.array([5.0, 0.0]), "far"),
            (np.array([0.0, 1.0]), "first"),
            (np.array([0.0, -1.0]), "second"),
        ]
        model = NnModel(metric=EUCLIDEAN, train_items=items)
        label, dist = nn1_classify(model, np.array([0.0, 0.0]))
        assert label == "first"
        assert dist == 1.0

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(5)
        model = self._model(rng, dim=6)
        with pytest.raises(DimensionMismatch):
            nn1_classify(model, np.zeros(7))
        with pytest.raises(DimensionMismatch):
            NnModel(metric=EUCLIDEAN, train_items=[(np.zeros(3), "a"), (np.zeros(4), "b")])

    def test_accuracy_matches_scan_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n_train, n_test, dim = rng.integers(3, 25), rng.integers(2, 15), rng.integers(2, 9)
            items = [
                (rng.uniform(-1, 1, size=dim), str(rng.integers(0, 4))) for _ in range(n_train)
            ]
            model = NnModel(metric=EUCLIDEAN, train_items=items)
            for _ in range(n_test):
                q = rng.uniform(-1, 1, size=dim)
                assert nn1_classify(model, q)[0] == nn1_scan(items, q)[0]

    def test_dtw_metric_uses_elastic_distance(self):
        items = [
            (np.array([0.0, 0.0, 1.0, 1.0]), "step"),
            (np.array([1.0, 1.0, 1.0, 1.0]), "flat"),
        ]
        model = NnModel(metric=DTW, train_items=items)
        label, dist = nn1_classify(model, np.array([0.0, 1.0, 1.0, 1.0]))
        assert label == "step"
        assert dist == 0.0

    def test_affine_invariance_of_znormalized_euclidean(self):
        rng = np.random.default_rng(12)
        length = 16

        def normalized(raw):
            return z_normalize(TimeSeries("d", "train", "1", raw)).values

        raws = [rng.uniform(-2, 2, size=length) for _ in range(8)]
        query_raw = rng.uniform(-2, 2, size=length)
        for scale, shift in [(3.7, -2.0), (-0.4, 11.0)]:
            base_items = [(normalized(r), str(i)) for i, r in enumerate(raws)]
            txf_items = [(normalized(scale * r + shift), str(i)) for i, r in enumerate(raws)]
            a = nn1_classify(NnModel(EUCLIDEAN, base_items), normalized(query_raw))
            b = nn1_classify(NnModel(EUCLIDEAN, txf_items), normalized(scale * query_raw + shift))
            assert a[0] == b[0]


class TestRunBaseline:
    def test_parse_image_path(self):
        assert parse_image_path("Alpha/train/3.png") == ("Alpha", "train", 3)

    def test_euclidean_baseline_over_manifest(self, tiny_archive: Path, tmp_path: Path):
        dirs = [tiny_archive / "Alpha", tiny_archive / "Beta"]
        out = tmp_path / "img"
        report = batch_encode(dirs, EncodeConfig(image_size=8), out)
        stats = [parse_dataset(*split_paths(d))[1] for d in dirs]
        manifests = build_manifest(SC, [(s, report) for s in stats], images_root=out)
        for m in manifests:
            preds = run_baseline(m, EUCLIDEAN, archive_root=tiny_archive)
            test_paths = {r.image_path for r in m.test_records()}
            assert {p.image_path for p in preds} == test_paths
            assert all(p.label in m.label_index for p in preds)
            # fixture classes are widely separated; 1-NN should be perfect
            truth = {r.image_path: r.target_label for r in m.test_records()}
            acc = sum(truth[p.image_path] == p.label for p in preds) / len(preds)
            assert acc == 1.0

    def test_rp_image_baseline(self, tiny_archive: Path, tmp_path: Path):
        dirs = [tiny_archive / "Beta"]
        out = tmp_path / "img"
        report = batch_encode(dirs, EncodeConfig(image_size=8), out)
        stats = [parse_dataset(*split_paths(d))[1] for d in dirs]
        (m,) = build_manifest(SC, [(s, report) for s in stats], images_root=out)
        preds = run_baseline(m, RP_IMAGE, images_root=out)
        assert len(preds) == len(m.test_records())
        assert all(p.confidence is not None for p in preds)

    def test_dtw_baseline_deterministic(self, tiny_archive: Path, tmp_path: Path):
        dirs = [tiny_archive / "Beta"]
        out = tmp_path / "img"
        report = batch_encode(dirs, EncodeConfig(image_size=8), out)
        stats = [parse_dataset(*split_paths(d))[1] for d in dirs]
        (m,) = build_manifest(SC, [(s, report) for s in stats], images_root=out)
        first = run_baseline(m, DTW, archive_root=tiny_archive, window=5)
        second = run_baseline(m, DTW, archive_root=tiny_archive, window=5)
        assert first == second
