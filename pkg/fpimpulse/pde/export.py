# export.py
# -----------------------------------------------------------------------------
# CSV renderings of solver output:
#   full fields           "t,w,z,value"
#   conditional densities "t,w,value"
# -----------------------------------------------------------------------------

from __future__ import annotations

from typing import Iterable, Iterator, Sequence, Tuple

import numpy as np

from ..core.utils import csv_text
from ..numerics.grid import Field2D, Grid2D

FIELD_HEADER = ("t", "w", "z", "value")
CONDITIONAL_HEADER = ("t", "w", "value")


def field_rows(t: float, field: Field2D) -> Iterator[Tuple[float, float, float, float]]:
    grid = field.grid
    for i, w in enumerate(grid.w):
        for k, z in enumerate(grid.z):
            yield (t, w, z, field.values[i, k])


def conditional_rows(t: float, grid: Grid2D, values: np.ndarray) -> Iterator[Tuple[float, float, float]]:
    for w, v in zip(grid.w, values):
        yield (t, w, v)


def fields_csv(snapshots: Iterable[Tuple[float, Field2D]]) -> str:
    """Stack (t, field) snapshots into one long-format CSV."""
    rows = (row for t, field in snapshots for row in field_rows(t, field))
    return csv_text(FIELD_HEADER, rows)


def conditional_csv(grid: Grid2D, times: Sequence[float], densities: np.ndarray) -> str:
    """Conditional densities (one row of values per time) as long-format CSV."""
    rows = (row for t, values in zip(times, densities) for row in conditional_rows(t, grid, values))
    return csv_text(CONDITIONAL_HEADER, rows)
