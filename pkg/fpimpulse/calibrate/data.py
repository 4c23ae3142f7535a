# data.py
# -----------------------------------------------------------------------------
# Observation data for calibration and their CSV readers.
#   histogram:  "bin_lo,bin_hi,count"  (empty bin_hi = unbounded last bin)
#   historical: "day,weight_g"
#   raw:        "weight_g"             (individual weights behind a histogram)
# Malformed files raise ArtifactIOError with the offending row number;
# well-formed files with invalid content raise InputError.
# -----------------------------------------------------------------------------

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from ..core.config import HIST_OPEN_BIN_OFFSET_G
from ..core.errors import ArtifactIOError, InputError
from ..growth.stats import SampleStats, sample_stats

logger = logging.getLogger(__name__)

HISTORICAL_MAX_DAY = 200.0


@dataclass(frozen=True, eq=False)
class HistogramData:
    """Binned weights of one survey; raw_weights, when known, drive the statistics."""

    bin_edges: np.ndarray
    counts: np.ndarray
    raw_weights: Optional[np.ndarray] = None

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        counts = np.asarray(self.counts)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise InputError("histogram bin edges must be strictly increasing")
        if counts.shape != (edges.size - 1,):
            raise InputError(f"histogram has {edges.size - 1} bins but {counts.size} counts")
        if np.any(counts < 0) or np.any(counts != np.round(counts)):
            raise InputError("histogram counts must be non-negative integers")
        if counts.sum() <= 0:
            raise InputError("histogram total count must be positive")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts.astype(np.int64))
        if self.raw_weights is not None:
            object.__setattr__(self, "raw_weights", np.asarray(self.raw_weights, dtype=float))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def midpoints(self) -> np.ndarray:
        """Bin centers; an unbounded bin uses its lower edge plus a fixed offset."""
        lo, hi = self.bin_edges[:-1], self.bin_edges[1:]
        return np.where(np.isfinite(hi), 0.5 * (lo + hi), lo + HIST_OPEN_BIN_OFFSET_G)

    @cached_property
    def observed_stats(self) -> SampleStats:
        if self.raw_weights is not None and self.raw_weights.size:
            return sample_stats(self.raw_weights)
        return sample_stats(np.repeat(self.midpoints, self.counts))


@dataclass(frozen=True, eq=False)
class HistoricalData:
    """(day, weight) observations of the population mean."""

    days: np.ndarray = field(default_factory=lambda: np.empty(0))
    weights: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        days = np.asarray(self.days, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if days.shape != weights.shape:
            raise InputError("historical days and weights differ in length")
        if np.any(days <= 0) or np.any(days > HISTORICAL_MAX_DAY):
            raise InputError(f"historical days must lie in (0, {HISTORICAL_MAX_DAY:g}]")
        if np.any(weights <= 0):
            raise InputError("historical weights must be positive")
        object.__setattr__(self, "days", days)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.days.size

    @property
    def unique_days(self) -> np.ndarray:
        return np.unique(self.days)


def _read_rows(path: Path, columns: Sequence[str]) -> List[dict]:
    try:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            header = [h.strip() for h in (reader.fieldnames or [])]
            missing = [c for c in columns if c not in header]
            if missing:
                raise ArtifactIOError(f"{path}: missing column(s) {', '.join(missing)}")
            reader.fieldnames = header
            return [row for row in reader if any((v or "").strip() for v in row.values())]
    except OSError as e:
        if isinstance(e, ArtifactIOError):
            raise
        raise ArtifactIOError(f"cannot read {path}: {e}") from e


def _number(path: Path, row_no: int, column: str, text: Optional[str]) -> float:
    try:
        return float((text or "").strip())
    except ValueError:
        raise ArtifactIOError(f"{path}:{row_no}: column {column!r} is not a number: {text!r}") from None


def read_histogram_csv(path: Path, raw_weights: Optional[np.ndarray] = None) -> HistogramData:
    """Read "bin_lo,bin_hi,count" rows; consecutive bins must share edges."""
    path = Path(path)
    rows = _read_rows(path, ("bin_lo", "bin_hi", "count"))
    if not rows:
        raise InputError(f"{path}: no histogram rows")
    edges: List[float] = []
    counts: List[float] = []
    for row_no, row in enumerate(rows, start=2):
        lo = _number(path, row_no, "bin_lo", row["bin_lo"])
        hi_text = (row["bin_hi"] or "").strip()
        hi = np.inf if hi_text == "" else _number(path, row_no, "bin_hi", hi_text)
        if edges and edges[-1] != lo:
            raise ArtifactIOError(f"{path}:{row_no}: bin_lo {lo:g} does not continue previous bin_hi {edges[-1]:g}")
        if not edges:
            edges.append(lo)
        edges.append(hi)
        counts.append(_number(path, row_no, "count", row["count"]))
    data = HistogramData(np.asarray(edges), np.asarray(counts), raw_weights)
    logger.info(f"loaded histogram {path.name}: {len(counts)} bins, {data.total} individuals")
    return data


def read_historical_csv(path: Path) -> HistoricalData:
    """Read "day,weight_g" rows."""
    path = Path(path)
    rows = _read_rows(path, ("day", "weight_g"))
    days = [_number(path, n, "day", r["day"]) for n, r in enumerate(rows, start=2)]
    weights = [_number(path, n, "weight_g", r["weight_g"]) for n, r in enumerate(rows, start=2)]
    data = HistoricalData(np.asarray(days), np.asarray(weights))
    logger.info(f"loaded {len(data)} historical observations from {path.name}")
    return data


def read_raw_weights_csv(path: Path) -> np.ndarray:
    """Read a single "weight_g" column of individual weights."""
    path = Path(path)
    rows = _read_rows(path, ("weight_g",))
    return np.asarray([_number(path, n, "weight_g", r["weight_g"]) for n, r in enumerate(rows, start=2)])
