"""Gaps between two environments: vertical (same lower value), horizontal
(same prophet value) and in area, plus the discounted-versus-alpha study.

Region ``b`` is the larger one throughout: its boundary must dominate the
boundary of ``a`` on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import boundaries as B
from .boundaries import RegionDescriptor, boundary, inverse_boundary
from .errors import DominanceError
from .measures import GapReport, alpha_area, area, area_exact, discounted_area
from .special_functions import find_root, lambert_w0, lambert_wm1, maximize_scalar

DOMINANCE_GRID = 1001
DOMINANCE_TOL = 1e-12
NUMERIC_TOL = 1e-10

__all__ = [
    "GapReport", "check_dominance", "gap_vertical", "gap_horizontal", "gap_area",
    "StudyTable", "discount_alpha_study", "parameters_for_area",
]


def check_dominance(a: RegionDescriptor, b: RegionDescriptor) -> None:
    xs = np.linspace(0.0, 1.0, DOMINANCE_GRID)
    short = boundary(a, xs) - boundary(b, xs)
    worst = int(np.argmax(short))
    if short[worst] > DOMINANCE_TOL:
        raise DominanceError(
            f"({b.label()}) does not dominate ({a.label()}): "
            f"shortfall {short[worst]:.3g} at x={xs[worst]:.4g}")


def _same_curve(a: RegionDescriptor, b: RegionDescriptor) -> bool:
    xs = np.linspace(0.0, 1.0, 1000)
    return bool(np.all(np.abs(boundary(a, xs) - boundary(b, xs)) <= DOMINANCE_TOL))


def _is_pair(a: RegionDescriptor, b: RegionDescriptor, ka: str, kb: str) -> bool:
    return a.kind == ka and b.kind == kb


def gap_vertical(a: RegionDescriptor, b: RegionDescriptor) -> GapReport:
    """Maximum over x of ``b(x) - a(x)``."""
    check_dominance(a, b)
    if _same_curve(a, b):
        return GapReport(0.0, 0.0)
    if _is_pair(a, b, B.F_I, B.F_G):
        # stationary point of x^2 - x - x ln x: 2x - ln x = 2
        x0 = -lambert_w0(-2.0 * math.exp(-2.0)) / 2.0
        return GapReport(x0, x0 * x0 - x0 - x0 * math.log(x0))
    if _is_pair(a, b, B.F_N, B.H_N) and a.n == b.n:
        n = a.n
        return GapReport(1.0 / n, (1.0 - 1.0 / n) ** n)
    x, v = maximize_scalar(lambda t: float(boundary(b, t) - boundary(a, t)), tol=NUMERIC_TOL)
    return GapReport(x, max(v, 0.0), True, "numeric", NUMERIC_TOL)


def _horizontal_stationarity(y: float) -> float:
    # derivative of 1 - sqrt(1-y) - exp(1 + W_{-1}(-y/e)) vanishes here
    return -2.0 * math.sqrt(1.0 - y) - 1.0 - lambert_wm1(-y / math.e)


def gap_horizontal(a: RegionDescriptor, b: RegionDescriptor) -> GapReport:
    """Maximum over y of ``a^-1(y) - b^-1(y)``."""
    check_dominance(a, b)
    if _same_curve(a, b):
        return GapReport(0.0, 0.0)
    if _is_pair(a, b, B.F_I, B.F_G):
        root = find_root(_horizontal_stationarity, (0.3, 0.99), tol=1e-13)
        y0 = root.x
        val = inverse_boundary(a, y0) - inverse_boundary(b, y0)
        # the derivative condition has one root; endpoints give 0
        return GapReport(y0, val, True, "numeric", 1e-13)
    if _is_pair(a, b, B.F_N, B.H_N) and a.n == b.n:
        # 1 - (1-y)^(1/n) - y/n increases on (0, 1]
        return GapReport(1.0, 1.0 - 1.0 / a.n)
    y, v = maximize_scalar(lambda t: inverse_boundary(a, t) - inverse_boundary(b, t), tol=NUMERIC_TOL)
    return GapReport(y, max(v, 0.0), True, "numeric", NUMERIC_TOL)


def gap_area(a: RegionDescriptor, b: RegionDescriptor) -> float:
    """Area of region ``b`` minus area of region ``a``."""
    check_dominance(a, b)
    qa, qb = area_exact(a), area_exact(b)
    if qa is not None and qb is not None:
        return float(qb - qa)
    return area(b) - area(a)


# -- discounted versus alpha-bounded ------------------------------------------------

MAX_AREA = 1.0 / 6.0


def parameters_for_area(target: float) -> tuple[float, float]:
    """``(alpha, beta)`` whose regions both have area ``target`` in ``[0, 1/6]``."""
    if target >= MAX_AREA:
        return 1.0, 1.0
    if target <= 0.0:
        return 0.0, 0.0
    alpha = find_root(lambda t: alpha_area(t) - target, (0.0, 1.0), tol=1e-15).x
    beta = find_root(lambda t: discounted_area(t) - target, (0.0, 1.0), tol=1e-15).x
    return alpha, beta


@dataclass(frozen=True)
class StudyTable:
    """Both halves of the discounted-versus-alpha comparison.

    ``size_rows``: ``(param, alpha_area, discounted_area, difference)`` for a
    common parameter value.  ``parameter_rows``: ``(area, alpha, beta,
    beta - alpha)`` for a common area.  The ``*_peak`` entries are the refined
    maxima of the last column.
    """

    size_rows: list[tuple[float, float, float, float]]
    parameter_rows: list[tuple[float, float, float, float]]
    size_peak: tuple[float, float, float, float]
    parameter_peak: tuple[float, float, float, float]


def _size_row(p: float) -> tuple[float, float, float, float]:
    qa, qb = alpha_area(p), discounted_area(p)
    return p, qa, qb, qa - qb


def _parameter_row(level: float) -> tuple[float, float, float, float]:
    alpha, beta = parameters_for_area(level)
    return level, alpha, beta, beta - alpha


def discount_alpha_study(grid: int = 200) -> StudyTable:
    """Compare the alpha-bounded and discounted regions two ways: by area at
    equal parameter values, and by parameter values at equal area."""
    if grid < 100:
        raise ValueError(f"grid must be >= 100, got {grid}")
    size_rows = [_size_row(i / grid) for i in range(1, grid + 1)]
    parameter_rows = [_parameter_row(MAX_AREA * i / grid) for i in range(1, grid + 1)]

    p, _ = maximize_scalar(lambda t: _size_row(t)[3], 1.0 / grid, 1.0, grid=grid, tol=1e-12)
    lvl, _ = maximize_scalar(lambda t: _parameter_row(t)[3], MAX_AREA / grid, MAX_AREA,
                             grid=grid, tol=1e-12)
    return StudyTable(size_rows, parameter_rows, _size_row(p), _parameter_row(lvl))
