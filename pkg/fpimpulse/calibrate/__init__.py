# Calibration of the growth law against histogram and historical data.

from .data import (HistogramData, HistoricalData, read_histogram_csv, read_historical_csv,
                   read_raw_weights_csv)
from .measures import err_measure, perf_measure_p
from .search import (AxisRange, CalibrationResult, GrowthRateResult, MonteCarloConfig, SearchBox,
                     evaluate_candidate, identify_from_histogram, identify_growth_rate)
