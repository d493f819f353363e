"""Numeric substrate: real Lambert W branches, harmonic numbers, bracketed
root finding, adaptive Simpson quadrature and a grid-seeded golden-section
maximizer.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError, NoSignChange

INV_E = math.exp(-1.0)
_INV_E_LO = -1.2428753672788363e-17  # 1/e - INV_E
BRANCH_SNAP = 1e-12

_HALLEY_MAXITER = 100
_ROOT_MAXITER = 200
_SIMPSON_MAX_DEPTH = 60
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite: [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise DomainError(f"interval is reversed: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


UNIT = Interval(0.0, 1.0)


@dataclass(frozen=True)
class RootResult:
    x: float
    residual: float
    iterations: int


def _halley(x: float, w: float) -> float:
    prev = math.inf
    for _ in range(_HALLEY_MAXITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            return w
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            return w
        dw = f / denom
        # near the branch point the update stalls at rounding level
        if abs(dw) >= prev and abs(dw) < 1e-6:
            return w
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            return w
        prev = abs(dw)
    raise ConvergenceError(f"Halley iteration for W({x}) did not converge")


def _branch_distance(x: float) -> float:
    # e x + 1 computed as e (x + 1/e) with 1/e split in two, so the
    # cancellation next to the branch point stays exact
    return max(math.e * ((x + INV_E) + _INV_E_LO), 0.0)


# W around -1/e as a series in p = +-sqrt(2(ex + 1))
_BRANCH_COEFFS = (-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0)
_SERIES_ONLY = 1e-3


def _branch_series(x: float, sign: float) -> tuple[float, bool]:
    """Series estimate of W and whether it is already accurate to rounding."""
    p = sign * math.sqrt(2.0 * _branch_distance(x))
    w = 0.0
    for c in reversed(_BRANCH_COEFFS):
        w = w * p + c
    return w, abs(p) < _SERIES_ONLY


def lambert_w0(x: float) -> float:
    """Principal real branch of the Lambert W function (``w >= -1``)."""
    x = float(x)
    if math.isnan(x):
        raise DomainError("lambert_w0 of nan")
    if x < -INV_E - BRANCH_SNAP:
        raise DomainError(f"lambert_w0 is real only for x >= -1/e, got {x}")
    if x <= -INV_E:
        return -1.0
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if x < -0.32:
        w, done = _branch_series(x, 1.0)
        if done:
            return w
    elif x <= 1.0:
        w = math.log1p(x)
    else:
        l1 = math.log(x)
        w = l1 - math.log(l1) if l1 > 1.0 else math.log1p(x)
    return max(_halley(x, w), -1.0)


def lambert_wm1(x: float) -> float:
    """Lower real branch ``W_{-1}`` on ``[-1/e, 0)``; returns values ``<= -1``."""
    x = float(x)
    if math.isnan(x) or x >= 0.0 or x < -INV_E - BRANCH_SNAP:
        raise DomainError(f"lambert_wm1 is real only for -1/e <= x < 0, got {x}")
    if x <= -INV_E:
        return -1.0
    if x < -0.25:
        w, done = _branch_series(x, -1.0)
        if done:
            return w
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    return min(_halley(x, w), -1.0)


def harmonic(n: int, exact: bool = False) -> float | Fraction:
    """Partial sum ``1 + 1/2 + ... + 1/n``.

    With ``exact=True`` the sum is returned as a :class:`Fraction`.
    """
    if n < 1 or int(n) != n:
        raise DomainError(f"harmonic needs a positive integer, got {n}")
    n = int(n)
    if exact:
        return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))
    return math.fsum(1.0 / i for i in range(1, n + 1))


def find_root(
    f: Callable[[float], float],
    bracket: Interval | tuple[float, float],
    tol: float = 1e-12,
    maxiter: int = _ROOT_MAXITER,
) -> RootResult:
    """Bracketed root of a continuous ``f`` by secant steps safeguarded with
    bisection.

    Stops once ``|f(x)| <= tol`` or the bracket is narrower than ``tol``.
    Raises :class:`NoSignChange` when ``f(lo) * f(hi) > 0``.
    """
    if not isinstance(bracket, Interval):
        bracket = Interval(*bracket)
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0 or abs(flo) <= tol and abs(flo) <= abs(fhi):
        return RootResult(lo, flo, 0)
    if fhi == 0.0 or abs(fhi) <= tol:
        return RootResult(hi, fhi, 0)
    if flo * fhi > 0.0:
        raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} have the same sign")

    bisect = False
    for it in range(1, maxiter + 1):
        width = hi - lo
        x = 0.5 * (lo + hi)
        if not bisect:
            s = hi - fhi * (hi - lo) / (fhi - flo)
            if lo < s < hi:
                x = s
        fx = f(x)
        if abs(fx) <= tol or fx == 0.0:
            return RootResult(x, fx, it)
        if (fx < 0.0) == (flo < 0.0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        # a step that failed to halve the bracket forces a bisection next
        bisect = (hi - lo) > 0.5 * width
        if hi - lo <= tol:
            x, fx = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
            return RootResult(x, fx, it)
    raise ConvergenceError(f"find_root did not converge in {maxiter} iterations")


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def integrate(
    f: Callable[[float], float],
    interval: Interval | tuple[float, float],
    tol: float = 1e-10,
    points: Sequence[float] = (),
    max_depth: int = _SIMPSON_MAX_DEPTH,
) -> float:
    """Adaptive Simpson estimate of the integral of ``f`` over ``interval``.

    ``points`` are interior breakpoints (kinks, jumps) at which the interval
    is split before adaptation; the tolerance is shared in proportion to
    piece width.
    """
    if not isinstance(interval, Interval):
        interval = Interval(*interval)
    a, b = interval.lo, interval.hi
    if a == b:
        return 0.0
    cuts = sorted({a, b, *(p for p in points if a < p < b)})
    total = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total.append(_adaptive_piece(f, lo, hi, tol * (hi - lo) / (b - a), max_depth))
    return math.fsum(total)


def _adaptive_piece(f, a, b, tol, max_depth):
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    parts = []
    stack = [(a, fa, m, fm, b, fb, whole, tol, 0)]
    while stack:
        a, fa, m, fm, b, fb, whole, eps, depth = stack.pop()
        lm, flm, left = _simpson(f, a, fa, m, fm)
        rm, frm, right = _simpson(f, m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or b - a <= 4.0 * math.ulp(max(abs(a), abs(b))):
            parts.append(left + right + delta / 15.0)
            continue
        if depth >= max_depth:
            raise ConvergenceError(f"integrate exceeded {max_depth} subdivision levels near x={m}")
        stack.append((a, fa, lm, flm, m, fm, left, 0.5 * eps, depth + 1))
        stack.append((m, fm, rm, frm, b, fb, right, 0.5 * eps, depth + 1))
    return math.fsum(parts)


def maximize_scalar(
    f: Callable[[float], float],
    lo: float = 0.0,
    hi: float = 1.0,
    grid: int = 1001,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Maximize ``f`` on ``[lo, hi]``: best of a uniform grid, refined by
    golden-section search on the neighbouring cells. Endpoints always compete.

    Returns ``(argmax, max)``.
    """
    xs = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    vals = [f(x) for x in xs]
    k = max(range(grid), key=vals.__getitem__)
    best_x, best_v = xs[k], vals[k]
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    for x, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v
