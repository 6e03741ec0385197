"""Performance tables and the z-score based rescaling to a common [0, 1] scale."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVariance
from .hierarchy import DECREASING, CriterionHierarchy


@dataclass(frozen=True)
class PerformanceTable:
    """Raw evaluations: one row per alternative, one column per elementary criterion."""

    alternatives: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray  # shape (len(alternatives), len(columns))

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.alternatives), len(self.columns)):
            raise DimensionMismatch(
                f"values shape {values.shape} does not match "
                f"{len(self.alternatives)} alternatives x {len(self.columns)} columns"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("performance table has non-finite cells")
        object.__setattr__(self, "values", values)
        if len(set(self.alternatives)) != len(self.alternatives):
            raise ValueError("duplicate alternative ids")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("duplicate column ids")

    def row(self, alternative: str) -> dict[str, float]:
        i = self.alternatives.index(alternative)
        return dict(zip(self.columns, self.values[i]))

    def column(self, column: str) -> np.ndarray:
        return self.values[:, self.columns.index(column)]

    @classmethod
    def from_csv(cls, path) -> "PerformanceTable":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            columns = tuple(header[1:])
            alternatives: list[str] = []
            rows: list[list[float]] = []
            for rec in reader:
                if not rec:
                    continue
                alternatives.append(rec[0])
                rows.append([float(v) for v in rec[1:]])
        return cls(tuple(alternatives), columns, np.array(rows))

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("alternative",) + self.columns)
            for name, row in zip(self.alternatives, self.values):
                writer.writerow([name] + [repr(float(v)) for v in row])


class NormalizedTable(PerformanceTable):
    """Evaluations on [0, 1]; all criteria increasing after normalization."""

    def __post_init__(self):
        super().__post_init__()
        if np.any(self.values < -1e-12) or np.any(self.values > 1 + 1e-12):
            raise ValueError("normalized table has cells outside [0, 1]")


def normalize(table: PerformanceTable, hierarchy: CriterionHierarchy) -> NormalizedTable:
    """Rescale each column by its z-score, mapped through 0.5 +/- z/6 and clipped to [0, 1].

    Increasing-direction criteria map z -> 0.5 + z/6, decreasing ones to 0.5 - z/6,
    so every column of the result is better-is-larger. The standard deviation uses
    the population divisor. Raises ZeroVariance for a constant column.
    """
    if len(table.alternatives) < 2:
        raise ValueError("need at least two alternatives to normalize")
    columns = hierarchy.columns()
    missing = [c for c in columns.values() if c not in table.columns]
    if missing:
        raise DimensionMismatch(f"table lacks columns {missing}")
    leaves = hierarchy.leaves
    out = np.empty((len(table.alternatives), len(leaves)))
    for j, leaf in enumerate(leaves):
        raw = table.column(columns[leaf])
        mean = raw.mean()
        std = raw.std()  # population divisor |A|
        if std == 0.0:
            raise ZeroVariance(columns[leaf])
        z = (raw - mean) / std
        if hierarchy.direction(leaf) == DECREASING:
            z = -z
        out[:, j] = np.clip(0.5 + z / 6.0, 0.0, 1.0)
    return NormalizedTable(table.alternatives, leaves, out)
