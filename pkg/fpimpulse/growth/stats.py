# stats.py
# -----------------------------------------------------------------------------
# Body-weight statistics of simulated ensembles.
# Population convention (divide by n); skewness is m3 / m2^(3/2). Sums use
# math.fsum so the result does not depend on how paths were chunked.
# -----------------------------------------------------------------------------

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..core.errors import InputError, StatisticsError
from .sde import PathEnsemble


@dataclass(frozen=True)
class SampleStats:
    """
    Average (g), standard deviation (g) and skewness of a weight sample.
    skewness is None when the sample has zero spread.
    """

    average: float
    std_dev: float
    skewness: Optional[float] = None

    @property
    def is_skew_defined(self) -> bool:
        return self.skewness is not None

    def require_skewness(self) -> float:
        """Skewness, or StatisticsError when the sample had zero spread."""
        if self.skewness is None:
            raise StatisticsError(f"skewness undefined: zero spread around {self.average:g}")
        return self.skewness

    def as_row(self) -> tuple:
        return (self.average, self.std_dev, self.skewness)


def sample_stats(values) -> SampleStats:
    """
    Statistics of a 1-D sample. A constant sample keeps its average and a
    zero std_dev; only its skewness is left undefined.

    Raises:
        InputError: empty sample.
    """
    x = np.asarray(values, dtype=float).ravel()
    n = x.size
    if n == 0:
        raise InputError("cannot compute statistics of an empty sample")
    if np.ptp(x) == 0.0:
        return SampleStats(float(x[0]), 0.0)
    average = math.fsum(x) / n
    dev = x - average
    m2 = math.fsum(dev * dev) / n
    m3 = math.fsum(dev * dev * dev) / n
    return SampleStats(average, math.sqrt(m2), m3 / m2 ** 1.5)


def stats_at(ensemble: PathEnsemble, time_index: int) -> SampleStats:
    """Statistics of X = exp(w) across paths at one sample time."""
    if not -len(ensemble.times) <= time_index < len(ensemble.times):
        raise InputError(f"time_index {time_index} out of range for {len(ensemble.times)} sample times")
    return sample_stats(ensemble.weights(time_index))


def stats_series(ensemble: PathEnsemble) -> List[SampleStats]:
    """Statistics at every sample time (mean and spread curves over time)."""
    return [stats_at(ensemble, k) for k in range(len(ensemble.times))]


def bin_counts(values, bin_edges) -> np.ndarray:
    """Counts per [edge_k, edge_k+1); the last edge may be +inf."""
    edges = np.asarray(bin_edges, dtype=float)
    idx = np.searchsorted(edges, np.asarray(values, dtype=float), side="right") - 1
    inside = (idx >= 0) & (idx < edges.size - 1)
    return np.bincount(idx[inside], minlength=edges.size - 1)


def histogram_counts(ensemble: PathEnsemble, time_index: int, bin_edges,
                     total: Optional[float] = None) -> np.ndarray:
    """
    Model weights binned on observed edges, rescaled to `total` individuals
    when given (so bars compare directly with observed counts).
    """
    counts = bin_counts(ensemble.weights(time_index), bin_edges).astype(float)
    if total is not None:
        counts *= total / ensemble.n_paths
    return counts
