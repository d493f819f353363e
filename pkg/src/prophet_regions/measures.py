"""Region statistics under the uniform measure on a prophet region.

Areas, typical differences ``E(y - x)`` and ratios ``E(y / x)``, exceedance
probabilities for the ray ``y = cx`` and the line ``y = x + d``, and the
worst-case (maximal) difference and ratio.  Closed forms are the primary
route; the ``*_quadrature`` functions and :func:`sample_region` provide
independent numeric checks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import boundaries as B
from .boundaries import RegionDescriptor, boundary, inverse_boundary
from .errors import DegenerateRegion, DomainError, UnsupportedRegion
from .special_functions import find_root, harmonic, integrate, lambert_w0, lambert_wm1, maximize_scalar

QUAD_TOL = 1e-12


class Divergent:
    """Marker for a typical ratio whose defining integral diverges."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "DIVERGENT"

    def __str__(self) -> str:
        return "divergent"


DIVERGENT = Divergent()


@dataclass(frozen=True)
class GapReport:
    """Location and value of a maximal gap.

    ``value`` is ``math.inf`` for unbounded gaps; ``attained`` is false when
    the supremum is only a limit.
    """

    location: float
    value: float
    attained: bool = True
    method: str = "closed_form"
    tolerance: float = 0.0

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.value)


@dataclass(frozen=True)
class RegionIntegrals:
    """Unnormalized integrals of 1, y - x and y / x over the region."""

    area: float
    difference: float
    ratio: float | Divergent


@dataclass(frozen=True)
class RegionStats:
    area: float
    typical_difference: float
    typical_ratio: float | Divergent
    method: str = "closed_form"


# -- areas -------------------------------------------------------------------

def discounted_area(beta: float) -> float:
    """``q(beta) = 1/6 - (1-beta)(1-sqrt(1-beta)) / (3 beta)``."""
    if beta == 0.0:
        return 0.0
    # (1 - sqrt(1-b)) / b == 1 / (1 + sqrt(1-b)); removes the 0/0 at small beta
    return 1.0 / 6.0 - (1.0 - beta) / (3.0 * (1.0 + math.sqrt(1.0 - beta)))


def alpha_area(alpha: float) -> float:
    return alpha * (alpha * alpha / 3.0 - alpha + 1.0) / 2.0


def area(desc: RegionDescriptor) -> float:
    """Area between the upper boundary and the diagonal."""
    kind, n, p = desc.kind, desc.n, desc.param
    if kind == B.F_I:
        return 1.0 / 6.0
    if kind == B.F_G:
        return 0.25
    if kind == B.G_N:
        return (n - 1) / (2.0 * (2 * n - 1))
    if kind == B.F_N:
        return (n - 1) / (2.0 * (n + 1))
    if kind == B.H_N:
        return (n - 1) / (2.0 * n)
    if kind == B.TRIANGLE:
        return 0.5
    if kind == B.IDENTITY:
        return 0.0
    if kind == B.ALPHA:
        return alpha_area(p)
    if kind == B.BETA:
        return discounted_area(p)
    raise UnsupportedRegion(desc.label())


def area_exact(desc: RegionDescriptor) -> Fraction | None:
    """Area as a rational number where it is one, else ``None``."""
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return Fraction(1, 6)
    if kind == B.F_G:
        return Fraction(1, 4)
    if kind == B.G_N:
        return Fraction(n - 1, 2 * (2 * n - 1))
    if kind == B.F_N:
        return Fraction(n - 1, 2 * (n + 1))
    if kind == B.H_N:
        return Fraction(n - 1, 2 * n)
    if kind == B.TRIANGLE:
        return Fraction(1, 2)
    if kind == B.IDENTITY:
        return Fraction(0)
    if kind == B.ALPHA:
        a = Fraction(desc.param)
        return a * (a * a / 3 - a + 1) / 2
    if kind == B.BETA and desc.param in (0.0, 1.0):
        return Fraction(int(desc.param), 6)
    return None


def _curve_fn(desc: RegionDescriptor):
    # scalar evaluation without the array round trip
    kind, n, p = desc.kind, desc.n, desc.param
    if kind == B.F_G:
        return lambda x: x - x * math.log(x) if x > 0.0 else 0.0
    if kind == B.G_N:
        e = n / (n - 1)
        return lambda x: n * x - (n - 1) * x ** e
    if kind == B.F_N:
        return lambda x: 1.0 - (1.0 - x) ** n
    if kind == B.F_I:
        return lambda x: 2.0 * x - x * x
    if kind == B.TRIANGLE:
        # equal to the boundary except at the single point x = 0
        return lambda x: 1.0
    return lambda x: float(boundary(desc, x))


def area_quadrature(desc: RegionDescriptor, tol: float = QUAD_TOL) -> float:
    f = _curve_fn(desc)
    return integrate(lambda x: f(x) - x, (0.0, 1.0), tol, points=desc.breakpoints)


# -- typical differences and ratios -------------------------------------------

_TYPICAL_KINDS = (B.F_I, B.F_G, B.F_N, B.H_N, B.TRIANGLE)


def _check_typical(desc: RegionDescriptor) -> None:
    if desc.kind == B.IDENTITY:
        raise DegenerateRegion(f"({desc.label()}) has zero area")
    if desc.kind not in _TYPICAL_KINDS or desc.pair.lower is B.Level.PARTIAL_W:
        raise UnsupportedRegion(f"typical statistics are not derived for ({desc.label()})")


def region_integrals(desc: RegionDescriptor) -> RegionIntegrals:
    """Closed-form raw integrals over the region (before dividing by area)."""
    _check_typical(desc)
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return RegionIntegrals(1.0 / 6.0, 1.0 / 60.0, 5.0 / 24.0)
    if kind == B.F_G:
        return RegionIntegrals(0.25, 1.0 / 27.0, 3.0 / 8.0)
    if kind == B.F_N:
        diff = (n - 1) ** 2 / (3.0 * (n + 2) * (2 * n + 1))
        ratio = -0.25 + harmonic(n) - 0.5 * harmonic(2 * n)
        return RegionIntegrals(area(desc), diff, ratio)
    if kind == B.H_N:
        return RegionIntegrals(area(desc), (n - 1) ** 2 / (6.0 * n * n), math.log(n) / 2.0)
    return RegionIntegrals(0.5, 1.0 / 6.0, DIVERGENT)


def region_integrals_quadrature(desc: RegionDescriptor, tol: float = QUAD_TOL) -> RegionIntegrals:
    """The same integrals reduced to 1-D and integrated numerically.

    Over ``x <= y <= b(x)``: the y-integral of ``y - x`` is ``(b - x)^2 / 2`` and
    that of ``y / x`` is ``(b^2 - x^2) / (2x)``.
    """
    _check_typical(desc)
    f = _curve_fn(desc)
    pts = desc.breakpoints
    a = integrate(lambda x: f(x) - x, (0.0, 1.0), tol, points=pts)
    d = integrate(lambda x: 0.5 * (f(x) - x) ** 2, (0.0, 1.0), tol, points=pts)
    if desc.kind == B.TRIANGLE:
        return RegionIntegrals(a, d, DIVERGENT)

    def ratio_density(x: float) -> float:
        if x == 0.0:
            return 0.0
        b = f(x)
        return (b - x) * (b + x) / (2.0 * x)

    r = integrate(ratio_density, (0.0, 1.0), tol, points=pts)
    return RegionIntegrals(a, d, r)


def typical_difference(desc: RegionDescriptor) -> float:
    """Mean of ``y - x`` for a uniform point of the region."""
    _check_typical(desc)
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return 0.1
    if kind == B.F_G:
        return 4.0 / 27.0
    if kind == B.F_N:
        return 2.0 * (n - 1) * (n + 1) / (3.0 * (n + 2) * (2 * n + 1))
    if kind == B.H_N:
        return (n - 1) / (3.0 * n)
    return 1.0 / 3.0


def typical_ratio(desc: RegionDescriptor) -> float | Divergent:
    """Mean of ``y / x`` for a uniform point of the region, or ``DIVERGENT``."""
    _check_typical(desc)
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return 1.25
    if kind == B.F_G:
        return 1.5
    if kind == B.F_N:
        return (n + 1) * (2.0 * harmonic(n) - harmonic(2 * n) - 0.5) / (n - 1)
    if kind == B.H_N:
        return n * math.log(n) / (n - 1)
    return DIVERGENT


def region_stats(desc: RegionDescriptor) -> RegionStats:
    return RegionStats(area(desc), typical_difference(desc), typical_ratio(desc))


# -- exceedance probabilities -------------------------------------------------

_TAIL_KINDS = (B.F_I, B.F_G, B.F_N, B.H_N, B.TRIANGLE)


def _check_tail(desc: RegionDescriptor) -> None:
    if desc.kind not in _TAIL_KINDS or desc.pair.lower is B.Level.PARTIAL_W:
        raise UnsupportedRegion(f"tail probabilities are not derived for ({desc.label()})")


def ratio_crossing(n: int, c: float) -> float:
    """Positive root ``t`` of ``c x = 1 - (1-x)^n`` for ``1 <= c < n``."""
    if c <= 1.0:
        return 1.0
    # f_n(x) - cx is concave, positive just right of its maximizer, <= 0 at 1
    peak = 1.0 - (c / n) ** (1.0 / (n - 1))
    return find_root(lambda x: 1.0 - (1.0 - x) ** n - c * x, (peak, 1.0), tol=1e-15).x


def tail_ratio(desc: RegionDescriptor, c: float) -> float:
    """``P(y / x >= c)`` for a uniform point of the region, ``c >= 1``."""
    _check_tail(desc)
    if c < 1.0:
        raise DomainError(f"ratio threshold must be >= 1, got {c}")
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return (2.0 - c) ** 3 if c <= 2.0 else 0.0
    if kind == B.F_G:
        return math.exp(2.0 * (1.0 - c))
    if kind == B.F_N:
        if c >= n:
            return 0.0
        t = ratio_crossing(n, c)
        return 2.0 / (n - 1) * ((1.0 - t) ** (n + 1) + (n + 1) * t * (1.0 - c * t / 2.0) - 1.0)
    if kind == B.H_N:
        return (n - c) / (c * (n - 1)) if c <= n else 0.0
    return 1.0 / c


def max_gap_fn(n: int) -> float:
    """``n^(-1/(n-1)) - n^(-n/(n-1))``, the largest ``f_n(x) - x``."""
    return n ** (-1.0 / (n - 1)) - n ** (-n / (n - 1.0))


def difference_support(desc: RegionDescriptor) -> float:
    """Largest ``y - x`` over the region."""
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return 0.25
    if kind == B.F_G:
        return math.exp(-1.0)
    if kind == B.F_N:
        return max_gap_fn(n)
    if kind == B.H_N:
        return 1.0 - 1.0 / n
    if kind == B.TRIANGLE:
        return 1.0
    raise UnsupportedRegion(desc.label())


def difference_crossings(n: int, d: float) -> tuple[float, float]:
    """Roots ``s < t`` of ``x + d = 1 - (1-x)^n`` in the unit interval."""
    peak = 1.0 - n ** (-1.0 / (n - 1))

    def g(x: float) -> float:
        return 1.0 - (1.0 - x) ** n - x - d

    s = find_root(g, (0.0, peak), tol=1e-15).x
    t = find_root(g, (peak, 1.0), tol=1e-15).x
    return s, t


def _g_lambert_term(d: float, w: float) -> float:
    return (1.0 + 4.0 * w - 2.0 * math.log(-d / w)) / (w * w)


def tail_difference(desc: RegionDescriptor, d: float) -> float:
    """``P(y - x >= d)`` for a uniform point of the region, ``d >= 0``."""
    _check_tail(desc)
    if d < 0.0:
        raise DomainError(f"difference threshold must be >= 0, got {d}")
    if d == 0.0:
        return 1.0
    if d > difference_support(desc):
        return 0.0
    kind, n = desc.kind, desc.n
    if kind == B.F_I:
        return math.sqrt(1.0 - 4.0 * d) * (1.0 - 4.0 * d)
    if kind == B.F_G:
        if d >= math.exp(-1.0):
            return 0.0
        w0, wm1 = lambert_w0(-d), lambert_wm1(-d)
        return d * d * (_g_lambert_term(d, w0) - _g_lambert_term(d, wm1))
    if kind == B.F_N:
        s, t = difference_crossings(n, d)
        # integral of 1 - (1-x)^n - x - d over [s, t]
        inner = ((t - s) - ((1.0 - s) ** (n + 1) - (1.0 - t) ** (n + 1)) / (n + 1)
                 - (t * t - s * s) / 2.0 - d * (t - s))
        return max(2.0 * (n + 1) / (n - 1) * inner, 0.0)
    if kind == B.H_N:
        r = d * n / (n - 1)
        return 1.0 - r * (2.0 - d - d / (n - 1))
    return (1.0 - d) ** 2


def tail_ratio_quadrature(desc: RegionDescriptor, c: float, tol: float = QUAD_TOL) -> float:
    """Normalized area between ``max(x, cx)`` and the boundary, by quadrature."""
    _check_tail(desc)
    f = _curve_fn(desc)
    pts = list(desc.breakpoints)
    if desc.kind == B.F_I and c < 2.0:
        pts.append(2.0 - c)
    elif desc.kind == B.F_G:
        pts.append(math.exp(1.0 - c))
    elif desc.kind == B.F_N and 1.0 < c < desc.n:
        pts.append(ratio_crossing(desc.n, c))
    elif desc.kind in (B.H_N, B.TRIANGLE):
        pts.append(1.0 / c)
    inner = integrate(lambda x: max(f(x) - c * x, 0.0), (0.0, 1.0), tol, points=pts)
    return inner / area(desc)


def tail_difference_quadrature(desc: RegionDescriptor, d: float, tol: float = QUAD_TOL) -> float:
    _check_tail(desc)
    f = _curve_fn(desc)
    # splitting at the numerically located peak keeps thin slivers near the
    # maximal difference visible to the adaptive rule
    pts = [*desc.breakpoints, maximize_scalar(lambda x: f(x) - x)[0]]
    if desc.kind == B.H_N:
        pts += [d / (desc.n - 1), 1.0 - d]
    elif desc.kind == B.TRIANGLE:
        pts.append(1.0 - d)
    inner = integrate(lambda x: max(f(x) - x - d, 0.0), (0.0, 1.0), tol, points=[p for p in pts if 0 < p < 1])
    return inner / area(desc)


# -- worst cases ---------------------------------------------------------------

def _max_difference_x(desc: RegionDescriptor) -> GapReport:
    kind, n, p = desc.kind, desc.n, desc.param
    if kind in (B.F_I,):
        return GapReport(0.5, 0.25)
    if kind == B.F_G:
        return GapReport(math.exp(-1.0), math.exp(-1.0))
    if kind == B.G_N:
        x0 = ((n - 1) / n) ** (n - 1)
        return GapReport(x0, ((n - 1) / n) ** n)
    if kind == B.F_N:
        return GapReport(1.0 - n ** (-1.0 / (n - 1)), max_gap_fn(n))
    if kind == B.H_N:
        return GapReport(1.0 / n, 1.0 - 1.0 / n)
    if kind == B.TRIANGLE:
        return GapReport(0.0, 1.0, attained=False)
    if kind == B.IDENTITY:
        return GapReport(0.0, 0.0)
    if kind == B.ALPHA:
        if p >= 0.5:
            return GapReport(0.5, 0.25)
        return GapReport(p, p * (1.0 - p))
    if kind == B.BETA:
        return GapReport(p / 2.0, p / 4.0)
    raise UnsupportedRegion(desc.label())


def max_difference(desc: RegionDescriptor, side: str = "x_axis") -> GapReport:
    """Largest vertical gap ``b(x) - x`` (``x_axis``) or horizontal gap
    ``y - b^-1(y)`` (``y_axis``).  Both have the same value; on the y-axis the
    location is the image of the x-axis maximizer.
    """
    rep = _max_difference_x(desc)
    if side == "x_axis":
        return rep
    if side != "y_axis":
        raise DomainError(f"side must be 'x_axis' or 'y_axis', got {side!r}")
    if desc.kind == B.TRIANGLE:
        return GapReport(1.0, 1.0, attained=False)
    return GapReport(float(boundary(desc, rep.location)), rep.value, rep.attained)


def max_difference_numeric(desc: RegionDescriptor, side: str = "x_axis", tol: float = 1e-10) -> GapReport:
    """Grid-seeded golden-section maximization, independent of the closed forms."""
    if side == "x_axis":
        f = _curve_fn(desc)
        x, v = maximize_scalar(lambda t: f(t) - t, tol=tol)
    else:
        x, v = maximize_scalar(lambda y: y - inverse_boundary(desc, y), tol=tol)
    return GapReport(x, v, True, "numeric", tol)


def max_ratio(desc: RegionDescriptor) -> GapReport:
    """Supremum of ``b(x) / x`` on ``(0, 1]``."""
    kind, n, p = desc.kind, desc.n, desc.param
    if kind in (B.F_G, B.TRIANGLE):
        return GapReport(0.0, math.inf, attained=False)
    if kind in (B.F_N, B.G_N):
        return GapReport(0.0, float(n), attained=False)
    if kind == B.H_N:
        return GapReport(1.0 / n, float(n))
    if kind == B.F_I or (kind in (B.ALPHA, B.BETA) and p > 0.0):
        return GapReport(0.0, 2.0, attained=False)
    if kind in (B.IDENTITY, B.ALPHA, B.BETA):
        return GapReport(1.0, 1.0)
    raise UnsupportedRegion(desc.label())


# -- Monte Carlo -----------------------------------------------------------------

MC_BLOCK = 1 << 16


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-style stream for one sample block; independent of worker layout."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _region_block(desc: RegionDescriptor, seed: int, block: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    rng = block_generator(seed, block)
    xs, ys, have = [], [], 0
    draw = max(size * 2, 1024)
    while have < size:
        x = rng.random(draw)
        y = rng.random(draw)
        keep = (y >= x) & (y <= boundary(desc, x))
        xs.append(x[keep])
        ys.append(y[keep])
        have += int(keep.sum())
    return np.concatenate(xs)[:size], np.concatenate(ys)[:size]


def sample_region(desc: RegionDescriptor, samples: int, seed: int = 0, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Uniform points of the region by rejection from the unit square.

    The output depends only on ``(samples, seed)``, not on ``threads``.
    """
    if area(desc) <= 0.0:
        raise DegenerateRegion(f"({desc.label()}) has zero area")
    sizes = [min(MC_BLOCK, samples - k) for k in range(0, samples, MC_BLOCK)]
    jobs = list(enumerate(sizes))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda j: _region_block(desc, seed, j[0], j[1]), jobs))
    else:
        parts = [_region_block(desc, seed, b, s) for b, s in jobs]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float

    def within(self, exact: float, k: float = 3.0) -> bool:
        return abs(self.mean - exact) <= k * self.stderr + 1e-15


def estimate(values: np.ndarray) -> Estimate:
    n = values.size
    return Estimate(float(values.mean()), float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0)
