"""Composite midpoint and Simpson quadrature for Kantorovich cell means."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

SCHEMES = ("midpoint", "simpson")


@dataclass(frozen=True)
class Quadrature:
    """Fixed-panel quadrature rule applied per integration interval."""

    scheme: str = "simpson"
    panels_per_cell: int = 8

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown quadrature scheme: {self.scheme!r}")
        if self.panels_per_cell < 1:
            raise ValueError("panels_per_cell must be >= 1")


def _evaluate(f: Callable[[float], float], x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
        if y.shape != x.shape:
            raise TypeError
    except TypeError:
        # Scalar-only callable; evaluate pointwise.
        y = np.fromiter((float(f(v)) for v in x), dtype=float, count=x.size)
    if not np.all(np.isfinite(y)):
        raise ValueError("non-finite integrand")
    return y


def integrate(f: Callable[[float], float], a: float, b: float, quad: Quadrature = Quadrature()) -> float:
    """Approximate the integral of f over [a, b].

    Simpson evaluates endpoints and midpoint of each panel and is exact for
    cubics per panel; midpoint is exact for linear integrands.
    """
    if not a < b:
        raise ValueError("integration bounds must satisfy a < b")
    edges = np.linspace(a, b, quad.panels_per_cell + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    h = (b - a) / quad.panels_per_cell
    if quad.scheme == "midpoint":
        return float(h * np.sum(_evaluate(f, mids)))
    fe = _evaluate(f, edges)
    fm = _evaluate(f, mids)
    return float(h / 6.0 * np.sum(fe[:-1] + 4.0 * fm + fe[1:]))


def cell_mean(f: Callable[[float], float], k: int, n: int, quad: Quadrature = Quadrature()) -> float:
    """Mean value of f over the cell [k/n, (k+1)/n), i.e. n * integral."""
    if n < 1:
        raise ValueError("sampling density n must be >= 1")
    return n * integrate(f, k / n, (k + 1) / n, quad)
