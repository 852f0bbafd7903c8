"""Noise-perturbed (probabilistic) operator and seeded Monte Carlo estimation.

The perturbed operator is the classical one applied to a noisy input:
either independent Gaussian draws added to the cell means ("cell"
placement) or a Gaussian field added to the sampled signal before the
means are taken ("sample" placement).

Reproducibility contract: every draw is a pure function of
(master_seed, trial_index, draw_index, lane).  Draws are produced by a
counter-based construction -- a splitmix64-style avalanche hash of the
counter tuple feeding a Box-Muller transform -- so any partition of trials
or indices across workers yields bitwise identical streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import Kernel
from .operator1d import (
    CellMeans,
    Domain1D,
    GridFunction1D,
    apply_sk,
    compute_cell_means,
    error_summary,
    pointwise_error,
    sample_function,
)
from .quadrature import Quadrature

PLACEMENTS = ("cell", "sample")
ERROR_KINDS = ("l1_total", "mean_l1", "discrete")

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_TRIAL_STREAM = _U64(0xD1B54A32D192ED03)
_INDEX_STREAM = _U64(0x8CB92BA72F3D8DD7)
_LANE_STREAM = _U64(0xEB44ACCAB455D165)


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean Gaussian perturbation with std tau and a master seed."""

    std: float
    placement: str = "cell"
    master_seed: int = 42
    mean: float = 0.0

    def __post_init__(self) -> None:
        if self.std < 0:
            raise ValueError("noise std must be nonnegative")
        if self.mean != 0.0:
            raise ValueError("only zero-mean noise is supported")
        if self.placement not in PLACEMENTS:
            raise ValueError(f"unknown noise placement: {self.placement!r}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class TrialContext:
    """One Monte Carlo realization, identified by its trial index."""

    trial_index: int

    def __post_init__(self) -> None:
        if self.trial_index < 0:
            raise ValueError("trial_index must be nonnegative")


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    trials: int


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


def _hash_bits(seed: int, trial: int, index: np.ndarray, lane: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = _mix64(_U64(seed) ^ (_U64(trial) * _TRIAL_STREAM))
        x = _mix64(x ^ (index * _INDEX_STREAM))
        x = _mix64(x ^ (_U64(lane) * _LANE_STREAM))
    return x


def normal_draws(master_seed: int, trial_index: int, count: int, start_index: int = 0) -> np.ndarray:
    """Standard normal draws for counter positions start..start+count-1.

    Two hashed 53-bit uniforms per position feed one Box-Muller cosine
    branch; u1 enters as log1p(-u1) so the argument never reaches zero.
    """
    idx = np.arange(start_index, start_index + count, dtype=np.uint64)
    u1 = (_hash_bits(master_seed, trial_index, idx, 0) >> _U64(11)).astype(np.float64) * 2.0 ** -53
    u2 = (_hash_bits(master_seed, trial_index, idx, 1) >> _U64(11)).astype(np.float64) * 2.0 ** -53
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * np.pi * u2)


def gaussian_field(noise: NoiseModel, trial: TrialContext, count: int, start_index: int = 0) -> np.ndarray:
    """N(0, std^2) draws for one trial; exact zeros when std == 0."""
    if noise.std == 0.0:
        return np.zeros(count)
    return noise.std * normal_draws(noise.master_seed, trial.trial_index, count, start_index)


def perturb_cell_means(means: CellMeans, noise: NoiseModel, trial: TrialContext) -> CellMeans:
    """Add one independent N(0, std^2) draw to each cell mean.

    With std == 0 the input is returned unchanged, which keeps the
    degenerate probabilistic pipeline bitwise equal to the classical one.
    """
    if noise.placement != "cell":
        raise ValueError("perturb_cell_means requires placement='cell'")
    if noise.std == 0.0:
        return means
    draws = gaussian_field(noise, trial, len(means.values))
    return CellMeans(
        n=means.n, k_min=means.k_min, k_max=means.k_max, values=means.values + draws
    )


def _sample_noise_cell_means(
    domain: Domain1D, means: CellMeans, noise: NoiseModel, trial: TrialContext
) -> np.ndarray:
    # "sample" placement in 1D: the noise field is piecewise constant on the
    # grid intervals [x_i, x_{i+1}) and zero outside [a, b]; its cell means
    # are computed exactly from the cumulative integral of that step field.
    x = domain.grid()
    draws = gaussian_field(noise, trial, len(x) - 1)
    cum = np.concatenate([[0.0], np.cumsum(draws * np.diff(x))])
    ks = np.arange(means.k_min, means.k_max + 2)
    edges = np.clip(ks / means.n, domain.a, domain.b)
    integrals = np.interp(edges, x, cum)
    return means.n * np.diff(integrals)


def apply_psk(
    f: Callable[[float], float],
    domain: Domain1D,
    n: int,
    kernel: Kernel,
    noise: NoiseModel,
    trial: TrialContext,
    quad: Quadrature = Quadrature(),
) -> GridFunction1D:
    """One realization of the noise-perturbed operator on the domain grid."""
    means = compute_cell_means(f, domain, n, quad)
    return apply_psk_from_means(means, domain, kernel, noise, trial)


def apply_psk_from_means(
    means: CellMeans,
    domain: Domain1D,
    kernel: Kernel,
    noise: NoiseModel,
    trial: TrialContext,
) -> GridFunction1D:
    """Perturbed operator with the clean cell means already computed."""
    if noise.std == 0.0:
        return apply_sk(means, kernel, domain)
    if noise.placement == "cell":
        return apply_sk(perturb_cell_means(means, noise, trial), kernel, domain)
    noisy = means.values + _sample_noise_cell_means(domain, means, noise, trial)
    perturbed = CellMeans(n=means.n, k_min=means.k_min, k_max=means.k_max, values=noisy)
    return apply_sk(perturbed, kernel, domain)


def _estimate(values: np.ndarray) -> MonteCarloEstimate:
    values = np.asarray(values, dtype=float)
    t = len(values)
    if t == 1 or np.all(values == values[0]):
        return MonteCarloEstimate(mean=float(values[0]), std_error=0.0, trials=t)
    se = float(np.std(values, ddof=1) / np.sqrt(t))
    return MonteCarloEstimate(mean=float(np.mean(values)), std_error=se, trials=t)


ErrorVector = tuple[float, float, float, float, float]


def expected_error_summary(
    f: Callable[[float], float],
    domain: Domain1D,
    n: int,
    kernel: Kernel,
    noise: NoiseModel,
    trials: int,
    quad: Quadrature = Quadrature(),
    threads: int = 1,
) -> dict[str, MonteCarloEstimate]:
    """Monte Carlo estimates of every error statistic over seeded trials.

    Trials are indexed 0..trials-1 and reduced in trial order; with a
    counter-based stream per trial the result does not depend on how the
    trials are scheduled.  A zero-noise model needs a single evaluation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    means = compute_cell_means(f, domain, n, quad)
    exact = sample_function(f, domain)

    def one_trial(t: int) -> ErrorVector:
        out = apply_psk_from_means(means, domain, kernel, noise, TrialContext(t))
        s = error_summary(pointwise_error(out, exact))
        return (s.l1_total, s.mean_l1, s.discrete_mean, s.max, s.min)

    if noise.std == 0.0:
        l1, ml1, disc, mx, mn = one_trial(0)
        zero = lambda v: MonteCarloEstimate(mean=v, std_error=0.0, trials=trials)
        return {
            "l1_total": zero(l1),
            "mean_l1": zero(ml1),
            "discrete": zero(disc),
            "max": zero(mx),
            "min": zero(mn),
        }

    rows = np.array(_map_trials(one_trial, trials, threads))
    keys = ("l1_total", "mean_l1", "discrete", "max", "min")
    return {k: _estimate(rows[:, i]) for i, k in enumerate(keys)}


def expected_error(
    f: Callable[[float], float],
    domain: Domain1D,
    n: int,
    kernel: Kernel,
    noise: NoiseModel,
    trials: int,
    error_kind: str = "l1_total",
    quad: Quadrature = Quadrature(),
    threads: int = 1,
) -> MonteCarloEstimate:
    """Expected value of one error functional of the perturbed operator."""
    if error_kind not in ERROR_KINDS:
        raise ValueError(f"unknown error kind: {error_kind!r}")
    summary = expected_error_summary(f, domain, n, kernel, noise, trials, quad, threads)
    return summary[error_kind]


def _map_trials(fn: Callable[[int], ErrorVector], trials: int, threads: int) -> list:
    if threads <= 1:
        return [fn(t) for t in range(trials)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))
