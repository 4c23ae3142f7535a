# measures.py
# -----------------------------------------------------------------------------
# Calibration objectives:
#   P   = sum of relative errors of (average, std_dev, skewness)
#   Err = mean squared residual of the model mean curve at observation days
# -----------------------------------------------------------------------------

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..core.errors import InputError, StatisticsError
from ..growth.stats import SampleStats
from .data import HistoricalData


def perf_measure_p(obs: SampleStats, model: SampleStats) -> float:
    """
    |dAve|/Ave + |dStd|/Std + |dSkw|/Skw, relative to the observed values.

    Raises:
        StatisticsError: an observed statistic is zero, or either sample has
            no skewness (zero spread).
    """
    refs = (obs.average, obs.std_dev, obs.require_skewness())
    values = (model.average, model.std_dev, model.require_skewness())
    total = 0.0
    for name, ref, value in zip(("average", "std_dev", "skewness"), refs, values):
        if ref == 0:
            raise StatisticsError(f"observed {name} is zero; relative error undefined")
        total += abs(value - ref) / abs(ref)
    return total


def err_measure(data: HistoricalData, mean_curve: Callable[[np.ndarray], np.ndarray]) -> float:
    """(1/N) * sum_i (E[X_{t_i}] - X_i)^2 over the historical observations."""
    if len(data) == 0:
        raise InputError("historical data is empty")
    residual = np.asarray(mean_curve(data.days), dtype=float) - data.weights
    return math.fsum(residual * residual) / len(data)
