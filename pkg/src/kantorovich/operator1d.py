"""1D sampling Kantorovich operator and its error functionals.

The operator replaces point samples of f by local integral means over the
cells [k/n, (k+1)/n) and expands them against integer translates of a
kernel:

    (S_n f)(x) = sum_k  ( n * integral of f over cell k ) * xi(n x - k).

With compactly supported kernels the sum at any x has at most ``order``
nonzero terms, so truncating k to the cells that meet the domain is exact
for points inside the cell cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import Kernel
from .quadrature import Quadrature, cell_mean


@dataclass(frozen=True)
class Domain1D:
    """Closed evaluation interval [a, b] with a uniform grid of points."""

    a: float
    b: float
    grid_points: int

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("domain requires a < b")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.grid_points)

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass
class CellMeans:
    """Kantorovich means value[k] = n * integral of f over [k/n, (k+1)/n)."""

    n: int
    k_min: int
    k_max: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.n < 1:
            raise ValueError("sampling density n must be >= 1")
        if len(self.values) != self.k_max - self.k_min + 1:
            raise ValueError("values length does not match cell index range")


@dataclass
class GridFunction1D:
    """Samples of a function on a Domain1D grid."""

    domain: Domain1D
    samples: np.ndarray

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=float)
        if len(self.samples) != self.domain.grid_points:
            raise ValueError("sample count does not match domain grid")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("grid function samples must be finite")


def cell_index_range(domain: Domain1D, n: int) -> tuple[int, int]:
    """Indices of all cells [k/n, (k+1)/n) that intersect [a, b)."""
    k_min = math.floor(n * domain.a)
    k_max = math.ceil(n * domain.b) - 1
    return k_min, k_max


def compute_cell_means(
    f: Callable[[float], float],
    domain: Domain1D,
    n: int,
    quad: Quadrature = Quadrature(),
) -> CellMeans:
    """Cell means of f for every cell intersecting the domain."""
    k_min, k_max = cell_index_range(domain, n)
    values = np.array([cell_mean(f, k, n, quad) for k in range(k_min, k_max + 1)])
    return CellMeans(n=n, k_min=k_min, k_max=k_max, values=values)


def sample_function(f: Callable[[float], float], domain: Domain1D) -> GridFunction1D:
    """Exact samples of f on the domain grid (for error measurement)."""
    x = domain.grid()
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.fromiter((float(f(v)) for v in x), dtype=float, count=x.size)
    return GridFunction1D(domain=domain, samples=y)


def apply_sk(means: CellMeans, kernel: Kernel, domain: Domain1D) -> GridFunction1D:
    """Evaluate the operator on the domain grid from precomputed cell means.

    The right endpoint b is assigned to the last covering cell (the cell
    membership is otherwise left-closed right-open).  A grid point whose own
    cell lies outside [k_min, k_max] is an error; neighbor cells touched
    only through wider kernel supports are treated as truncated (zero).
    """
    if len(means.values) == 0:
        raise ValueError("empty cell means")
    x = domain.grid()
    n = means.n
    u = n * x
    kc = np.floor(u).astype(np.int64)
    # The right endpoint is evaluated as a left limit when n*b lands exactly
    # on the cover's right edge, so it belongs to the last cell.
    clamp = (x == domain.b) & (kc == means.k_max + 1)
    u = np.where(clamp, np.nextafter(u, -np.inf), u)
    kc = np.where(clamp, means.k_max, kc)
    if np.any((kc < means.k_min) | (kc > means.k_max)):
        raise ValueError("grid outside cell cover")
    out = np.zeros_like(x)
    for j in range(kernel.order):
        kj = kc - j
        ok = (kj >= means.k_min) & (kj <= means.k_max)
        idx = np.clip(kj - means.k_min, 0, len(means.values) - 1)
        out += np.where(ok, means.values[idx] * kernel.evaluate(u - kj), 0.0)
    return GridFunction1D(domain=domain, samples=out)


def apply_sk_function(
    f: Callable[[float], float],
    domain: Domain1D,
    n: int,
    kernel: Kernel,
    quad: Quadrature = Quadrature(),
) -> GridFunction1D:
    """Compute cell means of f, then apply the operator.

    The cover is padded on the left by order - 1 cells: a kernel supported
    on [0, order) reaches that far below the containing cell, so with the
    padding the truncated sum is the exact operator at every grid point.
    """
    k_min, k_max = cell_index_range(domain, n)
    k_lo = k_min - (kernel.order - 1)
    values = np.array([cell_mean(f, k, n, quad) for k in range(k_lo, k_max + 1)])
    means = CellMeans(n=n, k_min=k_lo, k_max=k_max, values=values)
    return apply_sk(means, kernel, domain)


def pointwise_error(approx: GridFunction1D, exact: GridFunction1D) -> GridFunction1D:
    """Absolute pointwise difference |approx - exact| on a shared grid."""
    if approx.domain != exact.domain:
        raise ValueError("grid functions live on different domains")
    return GridFunction1D(
        domain=approx.domain, samples=np.abs(approx.samples - exact.samples)
    )


@dataclass(frozen=True)
class ErrorSummary:
    max: float
    min: float
    mean_l1: float
    discrete_mean: float
    l1_total: float


def error_summary(err: GridFunction1D) -> ErrorSummary:
    """Summary statistics of an error grid function.

    ``l1_total`` is the trapezoidal approximation of the integral of the
    error over the domain; ``mean_l1`` divides it by the domain length and
    ``discrete_mean`` is the plain average over grid points.
    """
    s = err.samples
    if s.size == 0:
        raise ValueError("empty error grid")
    x = err.domain.grid()
    l1_total = float(np.trapezoid(s, x))
    return ErrorSummary(
        max=float(np.max(s)),
        min=float(np.min(s)),
        mean_l1=l1_total / err.domain.length,
        discrete_mean=float(np.mean(s)),
        l1_total=l1_total,
    )
