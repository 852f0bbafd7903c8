"""Kernels for sampling Kantorovich operators.

Only compactly supported kernels are admitted: the indicator ("box") kernel
of [0, 1) and the cardinal B-splines obtained by repeated self-convolution
of the box, supported on [0, m).  Compact support makes every translate sum
finite and exact, and the polynomial decay estimate holds automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np


@dataclass(frozen=True)
class Kernel:
    """A compactly supported reconstruction kernel.

    ``evaluate`` is zero outside ``[-support_radius, support_radius]``; the
    actual support of the shipped families is ``[0, order)``.  ``l1_norm``
    and ``sup_norm`` are cached exact values, ``decay_bound = (L, delta)``
    are constants for the polynomial tail estimate
    ``|xi(x)| <= L * (1 + |x|) ** -(1 + delta)``.
    """

    family: str                       # "box" | "bspline"
    order: int                        # 1 for box, >= 2 for B-splines
    support_radius: float
    l1_norm: float
    sup_norm: float
    decay_bound: tuple[float, float]

    def __post_init__(self) -> None:
        if self.family not in ("box", "bspline"):
            raise ValueError(f"unknown kernel family: {self.family!r}")
        if self.order < 1:
            raise ValueError("kernel order must be >= 1")
        if self.support_radius < 0 or not math.isfinite(self.support_radius):
            raise ValueError("support_radius must be finite and nonnegative")
        L, delta = self.decay_bound
        if L <= 0 or delta <= 0:
            raise ValueError("decay_bound constants must be positive")

    @property
    def name(self) -> str:
        return "box" if self.family == "box" else f"bspline{self.order}"

    def evaluate(self, x):
        """Evaluate the kernel at ``x`` (scalar or ndarray)."""
        scalar = np.isscalar(x)
        x = np.asarray(x, dtype=float)
        if self.family == "box":
            out = np.where((x >= 0.0) & (x < 1.0), 1.0, 0.0)
        else:
            out = _bspline_values(x, self.order)
        return float(out) if scalar else out


def _bspline_values(x: np.ndarray, m: int) -> np.ndarray:
    # Truncated-power expansion of the order-m cardinal B-spline on [0, m):
    # B_m(x) = sum_j (-1)^j C(m, j) (x - j)_+^(m-1) / (m-1)!
    acc = np.zeros_like(x)
    for j in range(m + 1):
        t = x - j
        acc += (-1.0) ** j * math.comb(m, j) * np.where(t > 0.0, t, 0.0) ** (m - 1)
    return acc / math.factorial(m - 1)


def box_kernel() -> Kernel:
    """The indicator kernel of [0, 1)."""
    return Kernel(
        family="box",
        order=1,
        support_radius=1.0,
        l1_norm=1.0,
        sup_norm=1.0,
        decay_bound=(4.0, 1.0),
    )


# Peak of the order-m B-spline, and an L that dominates
# max |B_m(x)| * (1 + x)^2 over the support (checked in the test suite).
_BSPLINE_SUP = {2: 1.0, 3: 0.75}
_BSPLINE_DECAY_L = {2: 4.0, 3: 6.0}


def bspline_kernel(order: int) -> Kernel:
    """Cardinal B-spline of the given order (2 = tent, 3 = quadratic)."""
    if order < 2:
        raise ValueError("B-spline order must be >= 2; use box_kernel() for order 1")
    if order not in _BSPLINE_SUP:
        raise ValueError(f"unsupported B-spline order {order} (supported: 2, 3)")
    return Kernel(
        family="bspline",
        order=order,
        support_radius=float(order),
        l1_norm=1.0,
        sup_norm=_BSPLINE_SUP[order],
        decay_bound=(_BSPLINE_DECAY_L[order], 1.0),
    )


def kernel_from_name(name: str) -> Kernel:
    """Resolve a CLI kernel name: box, bspline2 or bspline3."""
    if name == "box":
        return box_kernel()
    if name.startswith("bspline"):
        return bspline_kernel(int(name[len("bspline"):]))
    raise ValueError(f"unknown kernel name: {name!r}")


@dataclass(frozen=True)
class PartitionReport:
    max_deviation: float
    passed: bool


def translate_sum_deviation(
    evaluate: Callable[[np.ndarray], np.ndarray],
    support_radius: float,
    points: Iterable[float],
) -> float:
    """Max deviation of sum_k f(x - k) from 1 over the given points.

    Works on any callable so that deliberately mis-normalized kernels can be
    probed; the sum runs over all integers k with |x - k| <= radius + 1,
    which covers the support of every contributing translate.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.size == 0:
        return 0.0
    reach = int(math.ceil(support_radius)) + 1
    worst = 0.0
    for x in pts:
        k0 = math.floor(x)
        ks = np.arange(k0 - reach, k0 + reach + 1)
        total = float(np.sum(evaluate(x - ks)))
        worst = max(worst, abs(total - 1.0))
    return worst


def check_partition_of_unity(
    kernel: Kernel, sample_points: Iterable[float], tol: float
) -> PartitionReport:
    """Check the unit-summation property sum_k xi(x - k) = 1 at sample points."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    dev = translate_sum_deviation(kernel.evaluate, kernel.support_radius, sample_points)
    return PartitionReport(max_deviation=dev, passed=dev <= tol)


def check_decay(kernel: Kernel, probe_points: Iterable[float]) -> bool:
    """Check |xi(x)| <= L (1 + |x|)^(-1-delta) at every probe point."""
    L, delta = kernel.decay_bound
    pts = np.asarray(list(probe_points), dtype=float)
    if pts.size == 0:
        return True
    vals = np.abs(kernel.evaluate(pts))
    bound = L * (1.0 + np.abs(pts)) ** (-1.0 - delta)
    return bool(np.all(vals <= bound))
