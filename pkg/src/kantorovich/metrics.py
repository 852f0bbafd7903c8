"""Image and signal quality metrics: MAE, MSE, PSNR, SSIM and error variance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.signal import convolve2d

from .noise import MonteCarloEstimate

PSNR_INFINITE = math.inf


@dataclass(frozen=True)
class SsimConfig:
    """SSIM window and stabilizer configuration.

    ``window`` is "gauss11" (11x11 Gaussian, sigma 1.5, the de facto
    standard) or "uniform<side>" for a flat square window.  The stabilizers
    are C1 = (k1 * peak)^2 and C2 = (k2 * peak)^2.
    """

    window: str = "gauss11"
    k1: float = 0.01
    k2: float = 0.03
    peak: float = 1.0

    def __post_init__(self) -> None:
        if self.k1 <= 0 or self.k2 <= 0 or self.peak <= 0:
            raise ValueError("k1, k2 and peak must be positive")
        self.window_array()  # validate the window spec eagerly

    def window_array(self) -> np.ndarray:
        if self.window == "gauss11":
            return _gaussian_window(11, 1.5)
        if self.window.startswith("uniform"):
            side = int(self.window[len("uniform"):])
            if side < 1:
                raise ValueError("uniform window side must be >= 1")
            return np.full((side, side), 1.0 / (side * side))
        raise ValueError(f"unknown SSIM window: {self.window!r}")


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    m = (size - 1) / 2.0
    y, x = np.ogrid[-m:m + 1, -m:m + 1]
    h = np.exp(-(x * x + y * y) / (2.0 * sigma * sigma))
    return h / h.sum()


def _check_shapes(f: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {g.shape}")
    return f, g


def mae(f: np.ndarray, g: np.ndarray) -> float:
    """Mean absolute difference."""
    f, g = _check_shapes(f, g)
    return float(np.mean(np.abs(f - g)))


def mse(f: np.ndarray, g: np.ndarray) -> float:
    """Mean squared difference."""
    f, g = _check_shapes(f, g)
    return float(np.mean((f - g) ** 2))


def psnr_from_mse(mse_value: float, peak: float = 1.0) -> float:
    if peak <= 0:
        raise ValueError("peak must be positive")
    if mse_value == 0.0:
        return PSNR_INFINITE
    return float(10.0 * np.log10(peak * peak / mse_value))


def psnr(f: np.ndarray, g: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB; +inf when the inputs coincide."""
    return psnr_from_mse(mse(f, g), peak)


def ssim(f: np.ndarray, g: np.ndarray, cfg: SsimConfig = SsimConfig()) -> float:
    """Mean structural similarity over a sliding local window.

    Local means, variances and cross-covariance are window-weighted moments;
    the per-window index is

        (2 mu_f mu_g + C1)(2 cov + C2)
        ------------------------------------------
        (mu_f^2 + mu_g^2 + C1)(var_f + var_g + C2)

    and the returned score is the mean of the valid-region map.
    """
    f, g = _check_shapes(f, g)
    win = cfg.window_array()
    if f.ndim != 2 or f.shape[0] < win.shape[0] or f.shape[1] < win.shape[1]:
        raise ValueError("image smaller than the SSIM window")
    c1 = (cfg.k1 * cfg.peak) ** 2
    c2 = (cfg.k2 * cfg.peak) ** 2
    mu1 = convolve2d(f, win, mode="valid")
    mu2 = convolve2d(g, win, mode="valid")
    var1 = convolve2d(f * f, win, mode="valid") - mu1 * mu1
    var2 = convolve2d(g * g, win, mode="valid") - mu2 * mu2
    cov = convolve2d(f * g, win, mode="valid") - mu1 * mu2
    num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2)
    return float(np.mean(num / den))


def ssim_global(f: np.ndarray, g: np.ndarray, cfg: SsimConfig = SsimConfig()) -> float:
    """Single-window SSIM with the whole image as one window."""
    f, g = _check_shapes(f, g)
    c1 = (cfg.k1 * cfg.peak) ** 2
    c2 = (cfg.k2 * cfg.peak) ** 2
    mu1, mu2 = float(np.mean(f)), float(np.mean(g))
    var1 = float(np.mean(f * f)) - mu1 * mu1
    var2 = float(np.mean(g * g)) - mu2 * mu2
    cov = float(np.mean(f * g)) - mu1 * mu2
    num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2)
    return num / den


def variance_abs_error(samples: Iterable[float]) -> float:
    """Population variance of absolute errors, E[x^2] - (E[x])^2."""
    if not isinstance(samples, np.ndarray):
        samples = np.asarray(list(samples), dtype=float)
    x = np.abs(samples.astype(float, copy=False))
    if x.size == 0:
        raise ValueError("empty sample vector")
    return float(np.var(x))


def expected_metric(per_trial_values: Iterable[float]) -> MonteCarloEstimate:
    """Sample mean and standard error of a per-trial metric sequence."""
    vals = np.asarray(list(per_trial_values), dtype=float)
    if vals.size < 2:
        raise ValueError("expected_metric needs at least two trials")
    if not np.all(np.isfinite(vals)):
        raise ValueError("degenerate trial")
    if np.all(vals == vals[0]):
        # Identical trials must report the common value exactly; a summed
        # mean can be off by an ulp.
        return MonteCarloEstimate(mean=float(vals[0]), std_error=0.0, trials=int(vals.size))
    return MonteCarloEstimate(
        mean=float(np.mean(vals)),
        std_error=float(np.std(vals, ddof=1) / np.sqrt(vals.size)),
        trials=int(vals.size),
    )


@dataclass(frozen=True)
class MetricsReport:
    """Classical quality metrics of one reconstruction against a reference."""

    mae: float
    mse: float
    psnr: float
    ssim: float
    var_abs_err: float


def compare_images(
    reference: np.ndarray, candidate: np.ndarray, cfg: SsimConfig = SsimConfig()
) -> MetricsReport:
    """All classical metrics of candidate vs reference in one pass."""
    err = np.abs(np.asarray(reference, dtype=float) - np.asarray(candidate, dtype=float))
    return MetricsReport(
        mae=mae(reference, candidate),
        mse=mse(reference, candidate),
        psnr=psnr(reference, candidate, cfg.peak),
        ssim=ssim(reference, candidate, cfg),
        var_abs_err=float(np.var(err)),
    )
