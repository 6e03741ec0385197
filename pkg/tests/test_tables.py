import csv

import numpy as np
import pytest

from hisort.errors import DimensionMismatch, ZeroVariance
from hisort.hierarchy import flat_hierarchy
from hisort.tables import NormalizedTable, PerformanceTable, normalize

from conftest import FIXTURES


def test_normalization_matches_reference_fixture(eu_norm):
    with open(FIXTURES / "eu_normalized_expected.csv", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        expected = {rec[0]: [float(v) for v in rec[1:]] for rec in reader}
    cols = tuple(header[1:])
    assert cols == eu_norm.columns
    worst = 0.0
    for i, a in enumerate(eu_norm.alternatives):
        diff = np.abs(eu_norm.values[i] - np.array(expected[a]))
        worst = max(worst, diff.max())
    assert worst <= 5e-4


def test_normalized_columns_center_and_scale(eu_norm):
    # z-scores through 0.5 +/- z/6: absent clipping the column mean maps to 0.5
    # and one sigma to 1/6.
    for col in eu_norm.columns:
        v = eu_norm.column(col)
        assert v.min() >= 0.0 and v.max() <= 1.0
        if 0.0 < v.min() and v.max() < 1.0:
            assert v.mean() == pytest.approx(0.5, abs=1e-9)
            assert v.std() == pytest.approx(1 / 6, abs=1e-9)


def test_decreasing_direction_flips_order():
    hier = flat_hierarchy(("up", "down"), directions={"down": "decreasing"})
    raw = PerformanceTable(("x", "y", "z"), ("up", "down"),
                           np.array([[1, 1], [2, 2], [3, 3]], float))
    norm = normalize(raw, hier)
    assert np.all(np.diff(norm.column("up")) > 0)
    assert np.all(np.diff(norm.column("down")) < 0)


def test_normalization_is_shift_and_scale_invariant():
    hier = flat_hierarchy(("a", "b"))
    rng = np.random.default_rng(5)
    vals = rng.normal(size=(6, 2))
    raw = PerformanceTable(tuple("pqrstu"), ("a", "b"), vals)
    shifted = PerformanceTable(tuple("pqrstu"), ("a", "b"), vals * 7.5 + 123.0)
    np.testing.assert_allclose(normalize(raw, hier).values,
                               normalize(shifted, hier).values, atol=1e-10)


def test_extreme_outlier_is_clipped():
    hier = flat_hierarchy(("a",))
    vals = np.array([[0.0]] * 9 + [[1000.0]])
    raw = PerformanceTable(tuple(f"x{i}" for i in range(10)), ("a",), vals)
    norm = normalize(raw, hier)
    assert norm.column("a").max() == 1.0


def test_constant_column_raises():
    hier = flat_hierarchy(("a", "b"))
    raw = PerformanceTable(("x", "y"), ("a", "b"), np.array([[1, 5], [2, 5]], float))
    with pytest.raises(ZeroVariance):
        normalize(raw, hier)


def test_missing_column_raises():
    hier = flat_hierarchy(("a", "b"))
    raw = PerformanceTable(("x", "y"), ("a",), np.array([[1], [2]], float))
    with pytest.raises(DimensionMismatch):
        normalize(raw, hier)


def test_table_validation():
    with pytest.raises(DimensionMismatch):
        PerformanceTable(("x",), ("a", "b"), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        PerformanceTable(("x", "x"), ("a",), np.zeros((2, 1)))
    with pytest.raises(ValueError):
        PerformanceTable(("x", "y"), ("a",), np.array([[np.nan], [1.0]]))
    with pytest.raises(ValueError):
        NormalizedTable(("x", "y"), ("a",), np.array([[1.5], [0.2]]))


def test_csv_roundtrip(tmp_path, eu_raw):
    path = tmp_path / "table.csv"
    eu_raw.to_csv(path)
    back = PerformanceTable.from_csv(path)
    assert back.alternatives == eu_raw.alternatives
    assert back.columns == eu_raw.columns
    np.testing.assert_array_equal(back.values, eu_raw.values)
