# plots.py
# -----------------------------------------------------------------------------
# Self-contained SVG renderings of run artifacts:
#   heatmap    "t,w,value"                 conditional density over (t, w)
#   curves     "<x>,<series>,..."          one polyline per numeric column
#   histogram  "bin_lo,bin_hi,observed,model"
#   intervals  "c,j,tau,w_lo,w_hi"         active transport sets over (c, j)
# Malformed CSV raises ArtifactIOError with the offending row.
# -----------------------------------------------------------------------------

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ArtifactIOError, InputError
from .svg import HEIGHT, MARGIN, PALETTE, WIDTH, render_chart

logger = logging.getLogger(__name__)

Rows = List[Dict[str, str]]


def _px(value: float) -> str:
    return f"{value:.2f}"


def read_table(path: Path, required: Sequence[str] = ()) -> Tuple[List[str], Rows]:
    """Header and rows of a CSV artifact."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            header = list(reader.fieldnames or [])
            rows = list(reader)
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise ArtifactIOError(f"cannot read {path}: {e}") from e
    if not header:
        raise ArtifactIOError(f"{path}: missing CSV header")
    missing = [c for c in required if c not in header]
    if missing:
        raise ArtifactIOError(f"{path}: missing columns {', '.join(missing)}")
    for row_no, row in enumerate(rows, start=2):
        if None in row or any(v is None for v in row.values()):
            raise ArtifactIOError(f"{path}:{row_no}: wrong number of fields")
    return header, rows


def _number(path: Path, row_no: int, column: str, text: str, allow_empty: bool = False) -> Optional[float]:
    text = (text or "").strip()
    if text == "" and allow_empty:
        return None
    try:
        value = float(text)
    except ValueError:
        raise ArtifactIOError(f"{path}:{row_no}: column {column!r} is not a number: {text!r}") from None
    if not np.isfinite(value):
        raise ArtifactIOError(f"{path}:{row_no}: column {column!r} is not finite")
    return value


def _column(path: Path, rows: Rows, column: str) -> np.ndarray:
    return np.array([_number(path, n, column, r[column]) for n, r in enumerate(rows, start=2)], dtype=float)


@dataclass(frozen=True)
class Axis:
    """Linear map from data [lo, hi] to pixels [p0, p1]."""

    lo: float
    hi: float
    p0: float
    p1: float

    @classmethod
    def fit(cls, values: Sequence[float], p0: float, p1: float, default: Tuple[float, float] = (0.0, 1.0)) -> "Axis":
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls(default[0], default[1], p0, p1)
        lo, hi = float(values.min()), float(values.max())
        if lo == hi:
            pad = 0.5 if lo == 0 else 0.1 * abs(lo)
            lo, hi = lo - pad, hi + pad
        return cls(lo, hi, p0, p1)

    def __call__(self, value: float) -> float:
        return self.p0 + (value - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)

    def ticks(self, n: int = 6) -> List[Dict[str, str]]:
        return [{"pos": _px(self(v)), "label": f"{v:.4g}"} for v in np.linspace(self.lo, self.hi, n)]


def _axes(xs: Sequence[float], ys: Sequence[float], x_default=(0.0, 1.0), y_default=(0.0, 1.0)) -> Tuple[Axis, Axis]:
    x = Axis.fit(xs, MARGIN["left"], WIDTH - MARGIN["right"], x_default)
    y = Axis.fit(ys, HEIGHT - MARGIN["bottom"], MARGIN["top"], y_default)
    return x, y


def _legend(labels: Sequence[str]) -> List[Dict[str, object]]:
    return [{"y": MARGIN["top"] + 20 * k, "color": PALETTE[k % len(PALETTE)], "label": label}
            for k, label in enumerate(labels)]


def _markers(x: Axis, impulse_times: Sequence[float]) -> List[str]:
    return [_px(x(t)) for t in impulse_times if x.lo <= t <= x.hi]


def _cell_edges(centers: np.ndarray) -> np.ndarray:
    if centers.size == 1:
        return np.array([centers[0] - 0.5, centers[0] + 0.5])
    mid = 0.5 * (centers[1:] + centers[:-1])
    return np.concatenate([[centers[0] - (mid[0] - centers[0])], mid, [centers[-1] + (centers[-1] - mid[-1])]])


def _shade(fraction: float) -> str:
    low, high = np.array([255, 255, 255]), np.array([30, 64, 175])
    rgb = np.rint(low + np.clip(fraction, 0.0, 1.0) * (high - low)).astype(int)
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(path: Path, impulse_times: Sequence[float] = ()) -> str:
    """Conditional density over (t, w); impulse times as dashed verticals."""
    _, rows = read_table(path, ("t", "w", "value"))
    t, w, v = (_column(path, rows, c) for c in ("t", "w", "value"))
    ts, ws = np.unique(t), np.unique(w)
    cells = []
    x, y = _axes(_cell_edges(ts) if ts.size else [], _cell_edges(ws) if ws.size else [])
    if rows:
        grid = np.zeros((ts.size, ws.size))
        grid[np.searchsorted(ts, t), np.searchsorted(ws, w)] = v
        vmax = float(grid.max())
        t_edges, w_edges = _cell_edges(ts), _cell_edges(ws)
        for i in range(ts.size):
            for k in range(ws.size):
                x0, x1 = x(t_edges[i]), x(t_edges[i + 1])
                y0, y1 = y(w_edges[k + 1]), y(w_edges[k])
                fill = _shade(grid[i, k] / vmax if vmax > 0 else 0.0)
                cells.append({"x": _px(x0), "y": _px(y0), "w": _px(x1 - x0), "h": _px(y1 - y0), "fill": fill})
    return render_chart(
        "heatmap", title=Path(path).stem, x_label="t (day)", y_label="w = log weight",
        x_ticks=x.ticks(), y_ticks=y.ticks(), cells=cells, markers=_markers(x, impulse_times), legend=[],
    )


def curves_svg(path: Path, impulse_times: Sequence[float] = ()) -> str:
    """First column on x, every further column a series."""
    header, rows = read_table(path)
    if len(header) < 2:
        raise ArtifactIOError(f"{path}: curves need an x column and at least one series")
    xs = _column(path, rows, header[0])
    series = {name: _column(path, rows, name) for name in header[1:]}
    all_y = np.concatenate(list(series.values())) if rows else np.empty(0)
    x, y = _axes(xs, all_y)
    drawn = []
    for k, (name, values) in enumerate(series.items()):
        points = [f"{_px(x(a))},{_px(y(b))}" for a, b in zip(xs, values)]
        markers = [{"x": _px(x(a)), "y": _px(y(b))} for a, b in zip(xs, values)] if len(xs) <= 60 else []
        drawn.append({"color": PALETTE[k % len(PALETTE)], "points": points, "markers": markers})
    return render_chart(
        "curves", title=Path(path).stem, x_label=header[0], y_label="value",
        x_ticks=x.ticks(), y_ticks=y.ticks(), series=drawn, markers=_markers(x, impulse_times),
        legend=_legend(header[1:]),
    )


def histogram_svg(path: Path) -> str:
    """Observed and model counts side by side per bin; an open last bin gets the previous width."""
    _, rows = read_table(path, ("bin_lo", "bin_hi", "observed", "model"))
    lo = _column(path, rows, "bin_lo")
    hi_values = [_number(path, n, "bin_hi", r["bin_hi"], allow_empty=True) for n, r in enumerate(rows, start=2)]
    hi = np.array([np.nan if v is None else v for v in hi_values], dtype=float)
    for k in np.flatnonzero(np.isnan(hi)):
        width = (hi[k - 1] - lo[k - 1]) if k > 0 else 1.0
        hi[k] = lo[k] + width
    observed, model = _column(path, rows, "observed"), _column(path, rows, "model")
    x, y = _axes(np.concatenate([lo, hi]), np.concatenate([[0.0], observed, model]))
    bars = []
    for a, b, counts in zip(lo, hi, zip(observed, model)):
        half = 0.5 * (x(b) - x(a))
        for k, count in enumerate(counts):
            left = x(a) + k * half
            bars.append({"x": _px(left), "y": _px(y(count)), "w": _px(half), "h": _px(y(0.0) - y(count)),
                         "color": PALETTE[k], "opacity": "0.85"})
    return render_chart(
        "bars", title=Path(path).stem, x_label="weight (g)", y_label="count",
        x_ticks=x.ticks(), y_ticks=y.ticks(), bars=bars, legend=_legend(["observed", "model"]),
    )


def intervals_svg(path: Path) -> str:
    """One band per cost c; impulses stacked inside the band, bars span [w_lo, w_hi]."""
    _, rows = read_table(path, ("c", "j", "tau", "w_lo", "w_hi"))
    c, j = _column(path, rows, "c"), _column(path, rows, "j")
    w_lo, w_hi = _column(path, rows, "w_lo"), _column(path, rows, "w_hi")
    if np.any(w_hi < w_lo):
        raise ArtifactIOError(f"{path}: interval with w_hi < w_lo")
    costs = np.unique(c)
    impulses = np.unique(j).astype(int)
    x, _ = _axes(np.concatenate([w_lo, w_hi]), [])
    top, bottom = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    band = (bottom - top) / max(costs.size, 1)
    lane = band / max(impulses.size, 1)
    bars = []
    for ci, ji, a, b in zip(c, j, w_lo, w_hi):
        row = int(np.searchsorted(costs, ci))
        k = int(np.searchsorted(impulses, int(ji)))
        left, right = x(a), max(x(b), x(a) + 2.0)
        bars.append({"x": _px(left), "y": _px(bottom - (row + 1) * band + k * lane + 1.0), "w": _px(right - left),
                     "h": _px(max(lane - 2.0, 1.0)), "color": PALETTE[(int(ji) - 1) % len(PALETTE)], "opacity": "1"})
    y_ticks = [{"pos": _px(bottom - (i + 0.5) * band), "label": f"c={value:.4g}"} for i, value in enumerate(costs)]
    return render_chart(
        "bars", title=Path(path).stem, x_label="w = log weight", y_label="transport cost c",
        x_ticks=x.ticks(), y_ticks=y_ticks, bars=bars, legend=_legend([f"j={k}" for k in impulses]),
    )


RENDERERS: Dict[str, Callable[..., str]] = {
    "heatmap": heatmap_svg,
    "curves": curves_svg,
    "histogram": lambda path, impulse_times=(): histogram_svg(path),
    "intervals": lambda path, impulse_times=(): intervals_svg(path),
}


def render_plots(paths: Sequence[Path], kind: str, impulse_times: Sequence[float] = ()) -> Dict[str, str]:
    """
    Render each CSV with the chosen kind; returns {"<stem>.svg": document}.

    Raises:
        InputError: unknown kind or duplicate output names.
        ArtifactIOError: unreadable or malformed CSV.
    """
    if kind not in RENDERERS:
        raise InputError(f"unknown plot kind {kind!r}; expected one of {', '.join(RENDERERS)}")
    out: Dict[str, str] = {}
    for path in paths:
        name = Path(path).stem + ".svg"
        if name in out:
            raise InputError(f"two inputs would both render to {name}")
        out[name] = RENDERERS[kind](Path(path), impulse_times=impulse_times)
        logger.debug(f"rendered {kind} plot {name}")
    return out
