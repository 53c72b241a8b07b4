from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timage.errors import EmptyClass, EmptyDataset, MalformedRow, SeriesTooShort
from timage.ucr import (
    TimeSeries,
    balanced_class_weights,
    compute_class_weights,
    parse_dataset,
    parse_split_file,
    split_paths,
    write_split_file,
    z_normalize,
)

from conftest import make_dataset, write_ucr_file
from oracles import z_normalize_reference


class TestParsing:
    def test_basic_rows_preserve_order_and_labels(self, tmp_path: Path):
        d = make_dataset(
            tmp_path,
            "Toy",
            train_rows=[("1", [0.5, 1.5, 2.5]), ("-1", [3.0, 2.0, 1.0])],
            test_rows=[("1", [1.0, 1.0, 2.0])],
        )
        series, stats = parse_dataset(*split_paths(d))
        assert [s.label for s in series] == ["1", "-1", "1"]
        assert [s.split for s in series] == ["train", "train", "test"]
        np.testing.assert_array_equal(series[0].values, [0.5, 1.5, 2.5])
        assert stats.class_counts_train == {"1": 1, "-1": 1}
        assert stats.class_counts_test == {"1": 1}

    def test_trailing_nan_padding_stripped(self, tmp_path: Path):
        path = tmp_path / "V" / "V_TRAIN.tsv"
        write_ucr_file(path, [("2", [1.0, 2.0, 3.0]), ("2", [5.0, 6.0])], pad_to=3)
        series = parse_split_file(path, "V", "train")
        assert series[0].original_length == 3
        assert series[1].original_length == 2
        np.testing.assert_array_equal(series[1].values, [5.0, 6.0])

    def test_padding_strip_then_length_check(self, tmp_path: Path):
        # "1 <TAB> 0.5 <TAB> NaN <TAB> NaN" leaves a single value
        path = tmp_path / "W" / "W_TRAIN.tsv"
        path.parent.mkdir(parents=True)
        path.write_text("1\t0.5\tNaN\tNaN\n")
        with pytest.raises(SeriesTooShort):
            parse_split_file(path, "W", "train")

    def test_interior_nan_is_malformed(self, tmp_path: Path):
        path = tmp_path / "W" / "W_TRAIN.tsv"
        path.parent.mkdir(parents=True)
        path.write_text("1\t0.5\tnan\t2.0\n")
        with pytest.raises(MalformedRow):
            parse_split_file(path, "W", "train")

    def test_non_numeric_token_is_malformed(self, tmp_path: Path):
        path = tmp_path / "W" / "W_TRAIN.tsv"
        path.parent.mkdir(parents=True)
        path.write_text("1\t0.5\toops\t2.0\n")
        with pytest.raises(MalformedRow):
            parse_split_file(path, "W", "train")

    def test_empty_file_rejected(self, tmp_path: Path):
        path = tmp_path / "W" / "W_TRAIN.tsv"
        path.parent.mkdir(parents=True)
        path.write_text("\n\n")
        with pytest.raises(EmptyDataset):
            parse_split_file(path, "W", "train")

    def test_round_trip_write_then_reparse(self, tmp_path: Path):
        rng = np.random.default_rng(11)
        rows = [(str(label), list(rng.standard_normal(rng.integers(2, 40))))
                for label in rng.integers(-3, 4, size=25)]
        src = tmp_path / "R" / "R_TRAIN.tsv"
        write_ucr_file(src, rows)
        first = parse_split_file(src, "R", "train")

        back = tmp_path / "R2" / "R2_TRAIN.tsv"
        write_split_file(first, back)
        second = parse_split_file(back, "R2", "train")

        assert len(first) == len(second)
        for a, b in zip(first, second):
            assert a.label == b.label
            np.testing.assert_array_equal(a.values, b.values)

    def test_variable_length_stats(self, tmp_path: Path):
        d = make_dataset(
            tmp_path,
            "Var",
            train_rows=[("1", [1.0, 2.0]), ("1", [1.0, 2.0, 3.0, 4.0])],
            test_rows=[("1", [0.0, 1.0, 2.0])],
            pad_to=4,
        )
        _, stats = parse_dataset(*split_paths(d))
        assert (stats.min_length, stats.max_length) == (2, 4)
        assert stats.is_variable_length

    def test_z_normalized_detection(self, tmp_path: Path):
        rng = np.random.default_rng(5)
        normed = [
            ("1", z_normalize_reference(rng.standard_normal(30))) for _ in range(4)
        ]
        d = make_dataset(tmp_path, "N", train_rows=normed[:2], test_rows=normed[2:])
        _, stats = parse_dataset(*split_paths(d))
        assert stats.z_normalized_already

        raw = [("1", list(5.0 + 3.0 * rng.standard_normal(30))) for _ in range(4)]
        d2 = make_dataset(tmp_path, "M", train_rows=raw[:2], test_rows=raw[2:])
        _, stats2 = parse_dataset(*split_paths(d2))
        assert not stats2.z_normalized_already


class TestZNormalize:
    def test_frozen_example(self):
        s = TimeSeries("d", "train", "1", [1.0, 2.0, 3.0])
        out = z_normalize(s).values
        np.testing.assert_allclose(
            out, [-1.224744871391589, 0.0, 1.224744871391589], atol=1e-12
        )
        np.testing.assert_allclose(out, z_normalize_reference([1, 2, 3]), atol=1e-12)

    def test_constant_series_maps_to_zeros(self):
        s = TimeSeries("d", "train", "1", [5.0, 5.0, 5.0, 5.0])
        np.testing.assert_array_equal(z_normalize(s).values, np.zeros(4))

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            s = TimeSeries("d", "train", "1", rng.standard_normal(rng.integers(2, 64)))
            once = z_normalize(s)
            twice = z_normalize(once)
            np.testing.assert_allclose(twice.values, once.values, atol=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(
                lambda v: v == 0.0 or abs(v) >= 1e-100
            ),
            min_size=2,
            max_size=64,
        )
    )
    def test_moments_property(self, values):
        s = TimeSeries("d", "train", "1", values)
        out = z_normalize(s).values
        if min(values) == max(values):
            np.testing.assert_array_equal(out, np.zeros(len(values)))
        else:
            assert abs(float(np.mean(out))) < 1e-9
            assert abs(float(np.std(out)) - 1.0) < 1e-9


class TestClassWeights:
    @pytest.mark.parametrize(
        "counts,expected",
        [
            ({"A": 10, "B": 10}, {"A": 1.0, "B": 1.0}),
            ({"A": 30, "B": 10}, {"A": 40 / 60, "B": 40 / 20}),
            ({"A": 1, "B": 1, "C": 2}, {"A": 4 / 3, "B": 4 / 3, "C": 2 / 3}),
        ],
    )
    def test_balanced_heuristic(self, counts, expected):
        weights = balanced_class_weights(counts)
        assert weights.keys() == expected.keys()
        for label in counts:
            assert weights[label] == pytest.approx(expected[label], abs=1e-12)

    def test_weighted_counts_sum_to_total(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            counts = {f"c{i}": int(rng.integers(1, 50)) for i in range(rng.integers(1, 8))}
            weights = balanced_class_weights(counts)
            total = sum(weights[c] * n for c, n in counts.items())
            assert total == pytest.approx(sum(counts.values()), rel=1e-12)

    def test_zero_count_rejected(self):
        with pytest.raises(EmptyClass):
            balanced_class_weights({"A": 3, "B": 0})

    def test_from_stats(self, tiny_archive: Path):
        _, stats = parse_dataset(*split_paths(tiny_archive / "Alpha"))
        weights = compute_class_weights(stats).weights
        assert set(weights) == {"1", "2", "3"}
        assert all(w == pytest.approx(1.0) for w in weights.values())
