# sde.py
# -----------------------------------------------------------------------------
# Monte-Carlo simulation of (W, Z) with a bounded scheme for Z.
# - W: explicit step w + r(1-z)dt, monotone because z stays in [0, 1].
# - Z: exact drift over dt, then the diffusion increment frozen at the drifted
#   point with the Gaussian draw truncated symmetrically so the new value
#   cannot leave [0, 1]. Symmetric truncation keeps the increment's mean.
# - PRNG: numpy Philox (counter-based); paths are cut into fixed-size chunks
#   and chunk k draws from SeedSequence(seed, spawn_key=(k,)), so results do
#   not depend on how many worker threads run the chunks.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from ..core.config import MC_CHUNK, WORKERS
from ..core.errors import InputError
from .params import GrowthParams, ModelKind

logger = logging.getLogger(__name__)

PRNG_ALGORITHM = "Philox4x64-10"


def step_w(w, z, dt: float, params: GrowthParams):
    """Log-weight update w + r(1-z)dt."""
    return w + params.r * (1.0 - z) * dt


def step_z_bounded(z, dt: float, params: GrowthParams, gaussian,
                   kind: ModelKind = ModelKind.PROPOSED):
    """
    Bounded ratio update.

    Args:
        z: Current ratio(s) in [0, 1].
        dt: Time step (day).
        params: Growth parameters.
        gaussian: Standard normal draw(s), same shape as z.
        kind: Coefficient model.

    Returns:
        New ratio(s), always within [0, 1]. z = 1 is absorbing.
    """
    z = np.asarray(z, dtype=float)
    drifted = kind.advance_drift(z, dt, params)
    scale = kind.diffusion(drifted, params) * math.sqrt(dt)
    room = np.minimum(drifted, 1.0 - drifted)
    with np.errstate(divide="ignore", invalid="ignore"):
        limit = np.where(scale > 0, room / scale, 0.0)
    noise = np.clip(gaussian, -limit, limit)
    z_new = np.clip(drifted + scale * noise, 0.0, 1.0)  # rounding guard only
    return z_new if z_new.ndim else float(z_new)


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """
    Sampled paths. w_samples and z_samples have shape (len(times), n_paths).
    """

    times: np.ndarray
    w_samples: np.ndarray
    z_samples: np.ndarray
    seed: int
    params: GrowthParams
    kind: ModelKind = ModelKind.PROPOSED

    @property
    def n_paths(self) -> int:
        return self.w_samples.shape[1]

    def weights(self, time_index: int) -> np.ndarray:
        """Body weights X = exp(w) at one sample time."""
        return np.exp(self.w_samples[time_index])


def _sample_steps(sample_times: Sequence[float], dt: float) -> np.ndarray:
    times = np.asarray(sample_times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InputError("sample_times must be a non-empty 1-D sequence")
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise InputError("sample_times must be positive and strictly increasing")
    steps = np.rint(times / dt).astype(np.int64)
    if np.any(steps < 1) or np.any(np.diff(steps) <= 0):
        raise InputError(f"sample_times are closer than dt={dt}")
    return steps


def _chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _simulate_chunk(params: GrowthParams, kind: ModelKind, steps: np.ndarray, dt: float,
                    n: int, seed: int, chunk: int, deterministic: bool):
    rng = _chunk_generator(seed, chunk)
    w = np.full(n, params.w0)
    z = np.full(n, params.z0)
    w_out = np.empty((steps.size, n))
    z_out = np.empty((steps.size, n))
    zero_noise = np.zeros(n)
    record = 0
    for step in range(1, int(steps[-1]) + 1):
        gaussian = zero_noise if deterministic else rng.standard_normal(n)
        w = step_w(w, z, dt, params)
        z = step_z_bounded(z, dt, params, gaussian, kind)
        if step == steps[record]:
            w_out[record] = w
            z_out[record] = z
            record += 1
    logger.debug(f"chunk {chunk}: {n} paths done")
    return w_out, z_out


def simulate_paths(
    params: GrowthParams,
    kind: ModelKind,
    sample_times: Sequence[float],
    dt: float,
    n_paths: int,
    seed: int,
    *,
    deterministic: bool = False,
    chunk_size: int = MC_CHUNK,
    workers: int = WORKERS,
) -> PathEnsemble:
    """
    Simulate n_paths independent paths and sample them at sample_times.

    Each sample time is snapped to the nearest multiple of dt. With
    deterministic=True the noise is switched off (sigma keeps its value for
    validation); the result is the drift ODE solution.

    Raises:
        ParameterError: params violate their invariants.
        InputError: bad sample times, dt or n_paths.
    """
    params.validate()
    if not dt > 0:
        raise InputError(f"dt must be positive (got {dt})")
    if n_paths < 1:
        raise InputError(f"n_paths must be >= 1 (got {n_paths})")
    steps = _sample_steps(sample_times, dt)

    sizes = [min(chunk_size, n_paths - start) for start in range(0, n_paths, chunk_size)]
    logger.info(
        f"simulating {n_paths} {kind.value} paths to t={steps[-1] * dt:g} "
        f"(dt={dt}, {len(sizes)} chunks, seed={seed}, {PRNG_ALGORITHM})"
    )

    def run(chunk: int):
        return _simulate_chunk(params, kind, steps, dt, sizes[chunk], seed, chunk, deterministic)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(k) for k in range(len(sizes))]

    return PathEnsemble(
        times=np.asarray(sample_times, dtype=float),
        w_samples=np.concatenate([p[0] for p in parts], axis=1),
        z_samples=np.concatenate([p[1] for p in parts], axis=1),
        seed=seed,
        params=params,
        kind=kind,
    )


def ode_log_weight(params: GrowthParams, t) -> np.ndarray:
    """Noise-free solution W_t = W_0 + r(1-Z_0)(1 - e^{-Dt})/D of the proposed law."""
    t = np.asarray(t, dtype=float)
    return params.w0 + params.r * (1.0 - params.z0) * (1.0 - np.exp(-params.d_relax * t)) / params.d_relax


def mean_curve(ensemble: PathEnsemble) -> Callable[[np.ndarray], np.ndarray]:
    """
    Ensemble mean weight as a function of time (g), linear between sample
    times and exact at them. Before the first sample it interpolates from
    (0, x0).
    """
    times = np.concatenate([[0.0], ensemble.times])
    means = np.concatenate([[ensemble.params.x0], np.exp(ensemble.w_samples).mean(axis=1)])

    def curve(t):
        return np.interp(t, times, means)

    return curve


def mean_weights(ensemble: PathEnsemble) -> List[float]:
    """Mean weight at each sample time."""
    return [float(m) for m in np.exp(ensemble.w_samples).mean(axis=1)]
