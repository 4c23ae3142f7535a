# Growth-law Monte Carlo: parameters, bounded SDE stepping, statistics.

from .params import GrowthParams, ModelKind
from .sde import (PRNG_ALGORITHM, PathEnsemble, mean_curve, mean_weights, ode_log_weight,
                  simulate_paths, step_w, step_z_bounded)
from .stats import SampleStats, bin_counts, histogram_counts, sample_stats, stats_at, stats_series
