"""Observation tables: CSV ingestion, unit-hypercube scaling and order checks."""
from __future__ import annotations

import csv
import enum
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

log = logging.getLogger(__name__)


class DataError(ValueError):
    """Raised for unusable input tables."""


@dataclass(frozen=True)
class OrientationVector:
    """Per-attribute direction: +1 when larger is better, -1 when smaller is."""

    deltas: tuple[int, ...]

    def __post_init__(self):
        deltas = tuple(int(v) for v in self.deltas)
        if len(deltas) < 1:
            raise ValueError("orientation needs at least one attribute")
        if any(v not in (1, -1) for v in self.deltas):
            raise ValueError("orientation entries must be +1 or -1")
        object.__setattr__(self, "deltas", deltas)

    @classmethod
    def parse(cls, spec: str) -> "OrientationVector":
        """Parse strings like ``"+,+,-,-"`` or ``"1,1,-1,-1"``."""
        table = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1}
        out = []
        for tok in spec.split(","):
            tok = tok.strip()
            if tok not in table:
                raise ValueError(f"bad orientation token {tok!r} in {spec!r}")
            out.append(table[tok])
        return cls(tuple(out))

    def __len__(self):
        return len(self.deltas)

    def as_array(self) -> np.ndarray:
        return np.array(self.deltas, dtype=float)

    @property
    def increasing(self) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.deltas) if v == 1)

    @property
    def decreasing(self) -> tuple[int, ...]:
        return tuple(j for j, v in enumerate(self.deltas) if v == -1)


@dataclass(frozen=True)
class Dataset:
    attribute_names: tuple[str, ...]
    object_ids: tuple[str, ...]
    values: np.ndarray
    dropped_rows: int = 0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2:
            raise DataError("values must be a 2-D table")
        n, d = values.shape
        if n < 1 or d < 1:
            raise DataError("dataset needs at least one row and one attribute")
        if len(self.attribute_names) != d or len(self.object_ids) != n:
            raise DataError("names/ids do not match the value table")
        if len(set(self.attribute_names)) != d:
            raise DataError("attribute names must be unique")
        if not np.all(np.isfinite(values)):
            raise DataError("dataset contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "attribute_names", tuple(self.attribute_names))
        object.__setattr__(self, "object_ids", tuple(str(i) for i in self.object_ids))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, attribute_names=None, object_ids=None) -> "Dataset":
        values = np.asarray(values, dtype=float)
        n, d = values.shape
        names = attribute_names or [f"x{j + 1}" for j in range(d)]
        ids = object_ids or [str(i + 1) for i in range(n)]
        return cls(tuple(names), tuple(ids), values)


@dataclass(frozen=True)
class NormalizedDataset:
    values: np.ndarray
    col_min: np.ndarray
    col_max: np.ndarray
    attribute_names: tuple[str, ...] = ()
    object_ids: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def col_range(self) -> np.ndarray:
        return self.col_max - self.col_min

    def transform(self, raw) -> tuple[np.ndarray, np.ndarray]:
        """Scale new raw observations with the stored min/max.

        Values outside the fit-time range are clipped into [0, 1]; the second
        return value flags the rows that needed clipping.
        """
        raw = np.atleast_2d(np.asarray(raw, dtype=float))
        z = (raw - self.col_min) / self.col_range
        outside = np.any((z < 0.0) | (z > 1.0), axis=1)
        return np.clip(z, 0.0, 1.0), outside

    def denormalize(self, values) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.col_range + self.col_min


def _parse_cell(cell: str) -> float:
    cell = cell.strip()
    if not cell:
        return math.nan
    try:
        v = float(cell)
    except ValueError:
        return math.nan
    return v if math.isfinite(v) else math.nan


def load_csv(path, id_column: str | None = None) -> Dataset:
    """Read a header-first CSV table.

    Rows with an empty or non-numeric attribute cell are dropped and the
    count is logged as a warning and kept on ``Dataset.dropped_rows``.
    Without ``id_column`` objects are named by their 1-based data-row index.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise DataError(f"{path} is not valid UTF-8") from exc
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if id_column is not None and id_column not in header:
        raise DataError(f"id column {id_column!r} not found in header")
    attr_idx = [j for j, h in enumerate(header) if h != id_column]
    names = [header[j] for j in attr_idx]
    if not names:
        raise DataError("no attribute columns")
    if len(set(names)) != len(names):
        dup = sorted({h for h in names if names.count(h) > 1})
        raise DataError(f"duplicate attribute names: {', '.join(dup)}")
    id_idx = header.index(id_column) if id_column is not None else None

    ids, values = [], []
    dropped = 0
    for i, row in enumerate(rows[1:], start=1):
        row = row + [""] * (len(header) - len(row))
        vals = [_parse_cell(row[j]) for j in attr_idx]
        if any(math.isnan(v) for v in vals):
            dropped += 1
            continue
        ids.append(row[id_idx].strip() if id_idx is not None else str(i))
        values.append(vals)
    if dropped:
        log.warning("dropped %d row(s) with missing or non-numeric values", dropped)
    if not values:
        raise DataError("zero surviving rows after dropping incomplete rows")
    return Dataset(tuple(names), tuple(ids), np.array(values), dropped_rows=dropped)


def normalize(ds: Dataset) -> NormalizedDataset:
    """Min-max scale every column onto [0, 1]."""
    X = ds.values
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    flat = [ds.attribute_names[j] for j in np.flatnonzero(~(hi > lo))]
    if flat:
        raise DataError(f"constant column(s) cannot be normalized: {', '.join(flat)}")
    Z = (X - lo) / (hi - lo)
    # pin the extremes exactly; rounding can leave 1 - ulp otherwise
    Z[X == lo] = 0.0
    Z[X == hi] = 1.0
    Z.setflags(write=False)
    return NormalizedDataset(Z, lo, hi, ds.attribute_names, ds.object_ids)


class Order(enum.Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_points(x, y, alpha: OrientationVector) -> Order:
    """Componentwise order of two observations under orientation ``alpha``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (len(alpha),) or y.shape != (len(alpha),):
        raise ValueError(f"points must have length {len(alpha)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("points must be finite")
    if np.array_equal(x, y):
        return Order.EQUAL
    gap = alpha.as_array() * (y - x)
    if np.all(gap >= 0):
        return Order.PRECEDES
    if np.all(gap <= 0):
        return Order.SUCCEEDS
    return Order.INCOMPARABLE


def attribute_rank_lists(nds: NormalizedDataset, alpha: OrientationVector) -> list[np.ndarray]:
    """One rank vector per attribute; rank 1 is the worst value, ties averaged."""
    X = nds.values if isinstance(nds, NormalizedDataset) else np.asarray(nds, dtype=float)
    if X.shape[1] != len(alpha):
        raise ValueError(f"orientation has {len(alpha)} entries, data has {X.shape[1]} columns")
    return [rankdata(delta * X[:, j], method="average") for j, delta in enumerate(alpha.deltas)]


def check_alpha(alpha: OrientationVector | Sequence[int], d: int) -> OrientationVector:
    if not isinstance(alpha, OrientationVector):
        alpha = OrientationVector(tuple(alpha))
    if len(alpha) != d:
        raise DataError(f"orientation has {len(alpha)} entries but the data has {d} attributes")
    return alpha
