"""Shared test utilities: step functions with exact integrals, and naive
brute-force reference implementations of the reconstruction operators."""

from __future__ import annotations

import math

import numpy as np

from kantorovich.kernels import Kernel


# ---------------------------------------------------------------------------
# Piecewise-constant (step) functions with exact arithmetic integrals.
# Represented as (edges, values): values[i] on [edges[i], edges[i+1]),
# right-continuous, zero outside [edges[0], edges[-1]).
# ---------------------------------------------------------------------------

def random_step(rng: np.random.Generator, lo=-3.0, hi=3.0, pieces=12):
    bps = np.sort(rng.uniform(lo, hi, pieces - 1))
    edges = np.concatenate([[lo], bps, [hi]])
    values = rng.uniform(-1.0, 1.0, pieces)
    return edges, values


def step_eval(edges, values, x):
    x = np.asarray(x, dtype=float)
    idx = np.searchsorted(edges, x, side="right") - 1
    out = np.zeros_like(x)
    inside = (idx >= 0) & (idx < len(values))
    out[inside] = values[idx[inside]]
    return out


def step_integral(edges, values, lo: float, hi: float) -> float:
    """Exact integral of the step function over [lo, hi]."""
    acc = 0.0
    for i in range(len(values)):
        a = max(lo, edges[i])
        b = min(hi, edges[i + 1])
        if b > a:
            acc += values[i] * (b - a)
    return acc


def step_cell_means(edges, values, n: int, k_min: int, k_max: int) -> np.ndarray:
    return np.array(
        [n * step_integral(edges, values, k / n, (k + 1) / n) for k in range(k_min, k_max + 1)]
    )


def step_l1_norm(edges, values) -> float:
    return float(np.sum(np.abs(values) * np.diff(edges)))


def aligned_trapezoid_grid(critical_points, delta=1e-7, subdiv=16) -> np.ndarray:
    """Grid for trapezoidal L1 norms of piecewise functions.

    Contains every critical point, subdivides each gap, and places an extra
    point ``delta`` before each critical point so that the trapezoid across
    every jump spans the same tiny width (the jump contributions then
    telescope away for compactly supported step functions).
    """
    crit = np.unique(np.asarray(critical_points, dtype=float))
    parts = []
    for a, b in zip(crit[:-1], crit[1:]):
        parts.append(a + (b - delta - a) * np.arange(subdiv) / subdiv)
        parts.append([b - delta])
    parts.append([crit[-1]])
    return np.unique(np.concatenate(parts))


def trapezoid_l1(samples, grid) -> float:
    return float(np.trapezoid(np.abs(samples), grid))


# ---------------------------------------------------------------------------
# Naive reference operators (deliberately simple loops).
# ---------------------------------------------------------------------------

def naive_sk_1d(x, n: int, k_min: int, k_max: int, values, kernel: Kernel, b: float) -> np.ndarray:
    """Brute-force operator sum over every stored cell at every point.

    Shares the library's right-endpoint convention: when n*b lands exactly
    on the cover's right edge the point is evaluated as a left limit.
    """
    out = np.zeros(len(x))
    for i, xi in enumerate(x):
        u = n * xi
        if xi == b and math.floor(u) == k_max + 1:
            u = math.nextafter(u, -math.inf)
        acc = 0.0
        for k in range(k_min, k_max + 1):
            acc += values[k - k_min] * kernel.evaluate(u - k)
        out[i] = acc
    return out


def naive_block_means(img: np.ndarray, w: int) -> np.ndarray:
    h, wd = img.shape
    out = np.zeros((math.ceil(h / w), math.ceil(wd / w)))
    for bi in range(out.shape[0]):
        for bj in range(out.shape[1]):
            block = img[bi * w:min((bi + 1) * w, h), bj * w:min((bj + 1) * w, wd)]
            out[bi, bj] = block.sum() / block.size
    return out


def naive_block_reconstruct(img: np.ndarray, w: int) -> np.ndarray:
    coeffs = naive_block_means(img, w)
    out = np.zeros_like(img)
    for i in range(img.shape[0]):
        for j in range(img.shape[1]):
            out[i, j] = coeffs[i // w, j // w]
    return out
