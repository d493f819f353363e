"""Registry of upper boundary functions for prophet regions.

A region is addressed by an environment (class of random sequences) and an
information pair (lower observer, prophet).  Every supported region has the
form ``{(x, y) : x <= y <= boundary(x)}`` on the unit square.

Supported combinations and their curves:

=====================  ==========  ==========================================
environment            pair        upper boundary
=====================  ==========  ==========================================
independent, n         u,m         ``1 - (1-x)^n``
general, n             u,m         ``min(nx, 1)``
independent/general,∞  u,m         ``1`` for ``x > 0`` (upper triangle)
general, ∞             v,m         ``x - x ln x``
general, n             v,m         ``nx - (n-1) x^(n/(n-1))``
iid, ∞                 v,m         ``x``
independent            v,m         ``2x - x^2``
alpha_bounded, 2       v,m         ``2x - x^2`` below alpha, linear above
discounted             v,m         ``2x - x^2/beta`` then tangent line to (1,1)
general, 2             w,m         ``2w - w^2``
=====================  ==========  ==========================================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, UnsupportedRegion
from .special_functions import UNIT, Interval, find_root, lambert_wm1


class Family(str, enum.Enum):
    IID = "iid"
    INDEPENDENT = "independent"
    GENERAL = "general"
    DISCOUNTED = "discounted"
    ALPHA_BOUNDED = "alpha_bounded"


class Level(str, enum.Enum):
    MINIMAL_U = "u"
    SEQUENTIAL_V = "v"
    PARTIAL_W = "w"
    PROPHET_M = "m"


@dataclass(frozen=True)
class EnvironmentSpec:
    """A class of random sequences; ``horizon=None`` means infinite."""

    family: Family
    horizon: Optional[int] = None
    param: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.horizon is not None:
            if int(self.horizon) != self.horizon or self.horizon < 2:
                raise DomainError(f"horizon must be an integer >= 2, got {self.horizon}")
            object.__setattr__(self, "horizon", int(self.horizon))
        needs_param = self.family in (Family.DISCOUNTED, Family.ALPHA_BOUNDED)
        if needs_param != (self.param is not None):
            raise DomainError(f"{self.family.value} environment: parameter "
                              f"{'required' if needs_param else 'not allowed'}")
        if self.param is not None:
            p = float(self.param)
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"environment parameter must lie in [0, 1], got {p}")
            object.__setattr__(self, "param", p)
        if self.family is Family.ALPHA_BOUNDED and self.horizon != 2:
            raise DomainError("alpha_bounded environment requires horizon 2")

    @property
    def infinite(self) -> bool:
        return self.horizon is None

    def label(self) -> str:
        tag = self.family.value
        if self.param is not None:
            tag += f":{self.param:g}"
        if self.horizon is not None:
            tag += f"@{self.horizon}"
        return tag


def iid(n: Optional[int] = None) -> EnvironmentSpec:
    return EnvironmentSpec(Family.IID, n)


def independent(n: Optional[int] = None) -> EnvironmentSpec:
    return EnvironmentSpec(Family.INDEPENDENT, n)


def general(n: Optional[int] = None) -> EnvironmentSpec:
    return EnvironmentSpec(Family.GENERAL, n)


def discounted(beta: float, n: Optional[int] = None) -> EnvironmentSpec:
    return EnvironmentSpec(Family.DISCOUNTED, n, beta)


def alpha_bounded(alpha: float) -> EnvironmentSpec:
    return EnvironmentSpec(Family.ALPHA_BOUNDED, 2, alpha)


@dataclass(frozen=True)
class InfoPair:
    lower: Level
    upper: Level = Level.PROPHET_M

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", Level(self.lower))
        object.__setattr__(self, "upper", Level(self.upper))
        if self.upper is not Level.PROPHET_M or self.lower is Level.PROPHET_M:
            raise DomainError("information pairs compare u, v or w against the prophet m")

    def label(self) -> str:
        return f"{self.lower.value},{self.upper.value}"


UM = InfoPair(Level.MINIMAL_U)
VM = InfoPair(Level.SEQUENTIAL_V)
WM = InfoPair(Level.PARTIAL_W)


def parse_pair(text: str) -> InfoPair:
    lower, _, upper = text.replace(" ", "").partition(",")
    try:
        return InfoPair(Level(lower), Level(upper or "m"))
    except ValueError as exc:
        raise DomainError(f"unknown information pair {text!r}") from exc


# Curve kinds; the descriptor resolves one of these at construction.
F_N = "f_n"            # independent u,m
H_N = "h_n"            # general u,m
TRIANGLE = "triangle"  # infinite-horizon u,m
F_G = "f_G"            # general v,m, infinite horizon
G_N = "g_n"            # general v,m, horizon n
IDENTITY = "identity"  # iid v,m, infinite horizon
F_I = "f_I"            # independent v,m; also general w,m at n = 2
ALPHA = "alpha"
BETA = "beta"


def _resolve(env: EnvironmentSpec, pair: InfoPair) -> str:
    fam, n, low = env.family, env.horizon, pair.lower
    if low is Level.MINIMAL_U and fam in (Family.INDEPENDENT, Family.GENERAL):
        if n is None:
            return TRIANGLE
        return F_N if fam is Family.INDEPENDENT else H_N
    if low is Level.SEQUENTIAL_V:
        if fam is Family.GENERAL:
            return F_G if n is None else G_N
        if fam is Family.IID and n is None:
            return IDENTITY
        if fam is Family.INDEPENDENT:
            return F_I
        if fam is Family.ALPHA_BOUNDED:
            return ALPHA
        if fam is Family.DISCOUNTED:
            return BETA
    if low is Level.PARTIAL_W and fam is Family.GENERAL and n == 2:
        return F_I
    raise UnsupportedRegion(f"no boundary formula for ({env.label()} | {pair.label()})")


@dataclass(frozen=True)
class RegionDescriptor:
    env: EnvironmentSpec
    pair: InfoPair
    kind: str = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", _resolve(self.env, self.pair))

    @property
    def domain(self) -> Interval:
        return UNIT

    @property
    def n(self) -> Optional[int]:
        return self.env.horizon

    @property
    def param(self) -> Optional[float]:
        return self.env.param

    @property
    def has_closed_inverse(self) -> bool:
        return self.kind not in (G_N, TRIANGLE)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the curve has a kink or changes formula."""
        if self.kind == H_N:
            return (1.0 / self.n,)
        if self.kind == ALPHA and 0.0 < self.param < 1.0:
            return (self.param,)
        if self.kind == BETA and 0.0 < self.param < 1.0:
            return (beta_breakpoint(self.param),)
        return ()

    def label(self) -> str:
        return f"{self.env.label()}|{self.pair.label()}"


def region(env: EnvironmentSpec, pair: InfoPair) -> RegionDescriptor:
    return RegionDescriptor(env, pair)


# -- discounted environment helpers -----------------------------------------

def beta_breakpoint(beta: float) -> float:
    """Abscissa ``1 - sqrt(1 - beta)`` where the parabola meets the line."""
    return 1.0 - math.sqrt(1.0 - beta)


def beta_kink_value(beta: float) -> float:
    """Ordinate of the breakpoint, ``3 - 2/b - 2 sqrt(1-b) + 2 sqrt(1-b)/b``.

    Evaluated as ``(1-s)(1+2s)/(1+s)`` with ``s = sqrt(1-b)``, which is the same
    number without the cancellation at small ``beta``.
    """
    s = math.sqrt(1.0 - beta)
    return (1.0 - s) * (1.0 + 2.0 * s) / (1.0 + s)


def beta_line_offset(beta: float) -> float:
    # the linear branch is x + (1-x) k, tangent to the parabola at the breakpoint
    s = math.sqrt(1.0 - beta)
    return (1.0 - s) / (1.0 + s)


# -- evaluation -------------------------------------------------------------

def _xlogx(x: np.ndarray) -> np.ndarray:
    safe = np.where(x > 0.0, x, 1.0)
    return np.where(x > 0.0, x * np.log(safe), 0.0)


def _curve(desc: RegionDescriptor, x: np.ndarray) -> np.ndarray:
    kind, n, p = desc.kind, desc.n, desc.param
    if kind == F_N:
        return 1.0 - (1.0 - x) ** n
    if kind == H_N:
        return np.where(x < 1.0 / n, n * x, 1.0)
    if kind == TRIANGLE:
        return np.where(x > 0.0, 1.0, 0.0)
    if kind == F_G:
        return x - _xlogx(x)
    if kind == G_N:
        return n * x - (n - 1) * x ** (n / (n - 1))
    if kind == IDENTITY:
        return x.copy()
    if kind == F_I:
        return 2.0 * x - x * x
    if kind == ALPHA:
        return np.where(x < p, 2.0 * x - x * x, x + (1.0 - x) * p)
    if kind == BETA:
        if p == 0.0:
            return x.copy()
        xb, k = beta_breakpoint(p), beta_line_offset(p)
        return np.where(x < xb, 2.0 * x - x * x / p, x + (1.0 - x) * k)
    raise UnsupportedRegion(kind)


def boundary(desc: RegionDescriptor, x):
    """Upper boundary value(s) at ``x``; accepts a scalar or an array."""
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError(f"boundary is defined on [0, 1], got {x}")
    out = _curve(desc, arr)
    return float(out) if out.ndim == 0 else out


def inverse_boundary(desc: RegionDescriptor, y: float) -> float:
    """Smallest ``x`` with ``boundary(desc, x) = y``."""
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"inverse_boundary is defined on [0, 1], got {y}")
    kind, n, p = desc.kind, desc.n, desc.param
    if kind == F_N:
        return -math.expm1(math.log1p(-y) / n) if y < 1.0 else 1.0
    if kind == H_N:
        return y / n
    if kind == F_G:
        arg = -y / math.e
        if arg == 0.0:
            # y too small to survive the division; the preimage is below any float
            return 0.0
        return math.exp(1.0 + lambert_wm1(arg))
    if kind == G_N:
        if y in (0.0, 1.0):
            return y
        return find_root(lambda t: n * t - (n - 1) * t ** (n / (n - 1)) - y, (0.0, 1.0), tol=1e-14).x
    if kind == IDENTITY:
        return y
    if kind == F_I:
        # 1 - sqrt(1 - y)
        return y / (1.0 + math.sqrt(1.0 - y))
    if kind == ALPHA:
        if p == 1.0 or y <= 2.0 * p - p * p:
            return y / (1.0 + math.sqrt(1.0 - y))
        return (y - p) / (1.0 - p)
    if kind == BETA:
        if p == 0.0:
            return y
        if y <= beta_kink_value(p):
            # beta (1 - sqrt(1 - y/beta))
            return y / (1.0 + math.sqrt(max(1.0 - y / p, 0.0)))
        k = beta_line_offset(p)
        return (y - k) / (1.0 - k)
    raise UnsupportedRegion(f"no inverse for ({desc.label()})")


def contains(desc: RegionDescriptor, point: tuple[float, float], tol: float = 0.0) -> bool:
    """Closed-region membership ``0 <= x <= y <= boundary(x)`` (slack ``tol``)."""
    x, y = point
    if not (-tol <= x <= 1.0 + tol) or y < x - tol:
        return False
    xc = min(max(x, 0.0), 1.0)
    return y <= boundary(desc, xc) + tol


def supported_regions(ns=(2, 3, 4, 8), params=(0.0, 0.25, 0.5, 0.75, 1.0)) -> list[RegionDescriptor]:
    """A representative list of every supported kind, for sweeps and checks."""
    out = [RegionDescriptor(independent(), VM), RegionDescriptor(general(), VM),
           RegionDescriptor(iid(), VM), RegionDescriptor(general(2), WM),
           RegionDescriptor(independent(), UM), RegionDescriptor(general(), UM)]
    for n in ns:
        out += [RegionDescriptor(independent(n), UM), RegionDescriptor(general(n), UM),
                RegionDescriptor(general(n), VM), RegionDescriptor(independent(n), VM)]
    for p in params:
        out += [RegionDescriptor(alpha_bounded(p), VM), RegionDescriptor(discounted(p), VM)]
    return out
