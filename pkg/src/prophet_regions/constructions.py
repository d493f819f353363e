"""Extremal and random finite sequences for feeding to the oracle.

The extremal constructions land on (or sweep the interior below) the upper
boundary of a prophet region; the random generators draw members of an
environment for membership and ordering checks.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .boundaries import EnvironmentSpec, Family, beta_breakpoint
from .errors import DomainError, UnsupportedRegion
from .sequences import DiscreteSequence

__all__ = [
    "DiscreteSequence", "iid_bernoulli", "dilated_bernoulli", "unit_vectors_general",
    "worst_case_u_difference", "statistician_worst_case", "discounted_extremal",
    "alpha_extremal", "random_sequence", "random_dependent",
]


def _unit(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")
    return x


def _horizon(n: int) -> int:
    if int(n) != n or n < 2:
        raise DomainError(f"horizon must be an integer >= 2, got {n}")
    return int(n)


def _bernoulli(p: float, high: float = 1.0) -> list[tuple[float, float]]:
    return [(1.0 - p, 0.0), (p, high)]


def iid_bernoulli(n: int, x: float) -> DiscreteSequence:
    """``n`` independent copies of Bernoulli(x): ``(U, M) = (x, 1 - (1-x)^n)``."""
    n, x = _horizon(n), _unit("x", x)
    return DiscreteSequence(n, marginals=[_bernoulli(x)] * n)


def dilated_bernoulli(n: int, x: float, lam: float) -> DiscreteSequence:
    """Each coordinate is ``a = lam + (1-lam) x`` with probability ``x/a``, else 0.

    The mean stays ``x`` while ``M`` moves from ``x`` (``lam=0``) up to the
    iid Bernoulli value (``lam=1``).
    """
    n, x, lam = _horizon(n), _unit("x", x), _unit("lambda", lam)
    a = lam + (1.0 - lam) * x
    if a <= 0.0:
        raise DomainError("lambda + x - lambda*x must be positive")
    p = min(x / a, 1.0)
    return DiscreteSequence(n, marginals=[_bernoulli(p, a)] * n)


def unit_vectors_general(n: int, x: float, lam: float = 1.0) -> DiscreteSequence:
    """Dependent sequence supported on (scaled) unit vectors.

    For ``x >= 1/n``: ``e_1`` with probability ``x`` and ``lam e_i`` with
    probability ``(1-x)/(n-1)`` for ``i >= 2``, so ``M = x + lam (1-x)``.
    For ``x < 1/n``: ``e_1`` and each ``lam e_i`` with probability ``x``, the
    zero vector otherwise, so ``M = x + (n-1) lam x``.  ``U = x`` throughout.
    """
    n, x, lam = _horizon(n), _unit("x", x), _unit("lambda", lam)

    def vec(i: int, scale: float) -> tuple[float, ...]:
        return tuple(scale if k == i else 0.0 for k in range(n))

    if x * n >= 1.0:
        rest = (1.0 - x) / (n - 1)
        atoms = [(x, vec(0, 1.0))] + [(rest, vec(i, lam)) for i in range(1, n)]
    else:
        atoms = [(x, vec(0, 1.0))] + [(x, vec(i, lam)) for i in range(1, n)]
        atoms.append((1.0 - n * x, (0.0,) * n))
    return DiscreteSequence(n, atoms=atoms)


def worst_case_u_difference(env: EnvironmentSpec) -> DiscreteSequence:
    """Sequence attaining the largest ``M - U`` over a finite-horizon environment."""
    n = env.horizon
    if n is None:
        raise UnsupportedRegion("worst case for M - U needs a finite horizon")
    if env.family in (Family.INDEPENDENT, Family.IID):
        return iid_bernoulli(n, 1.0 - n ** (-1.0 / (n - 1)))
    if env.family is Family.GENERAL:
        return unit_vectors_general(n, 1.0 / n)
    raise UnsupportedRegion(f"no M - U worst case for {env.label()}")


def statistician_worst_case(x: float) -> DiscreteSequence:
    """``X_1 = x`` surely and ``X_2 ~ Bernoulli(x)``: ``(V, M) = (x, 2x - x^2)``."""
    x = _unit("x", x)
    return DiscreteSequence(2, marginals=[[(1.0, x)], _bernoulli(x)])


def discounted_extremal(x: float, beta: float) -> DiscreteSequence:
    """Two-step discounted sequence on the upper boundary of its ``(v, m)`` region.

    Below the breakpoint ``x_b`` the second value is ``beta`` times a
    Bernoulli(x/beta) variable.  Above it the first value is 1 with probability
    ``(x - x_b)/(1 - x_b)`` and ``x_b`` otherwise, which traces the tangent line.
    """
    x, beta = _unit("x", x), _unit("beta", beta)
    if beta == 0.0:
        return DiscreteSequence(2, marginals=[[(1.0, x)], [(1.0, 0.0)]])
    xb = beta_breakpoint(beta)
    if x < xb:
        return DiscreteSequence(2, marginals=[[(1.0, x)], _bernoulli(x / beta, beta)])
    r = (x - xb) / (1.0 - xb) if xb < 1.0 else 1.0
    first = [(1.0 - r, xb), (r, 1.0)] if r < 1.0 else [(1.0, 1.0)]
    return DiscreteSequence(2, marginals=[first, _bernoulli(xb / beta, beta)])


def alpha_extremal(x: float, alpha: float) -> DiscreteSequence:
    """``X_1 = min(x, alpha)`` surely and ``X_2 ~ Bernoulli(x)``."""
    x, alpha = _unit("x", x), _unit("alpha", alpha)
    return DiscreteSequence(2, marginals=[[(1.0, min(x, alpha))], _bernoulli(x)])


# -- random members of an environment --------------------------------------------

GRID_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)


def _values(rng: np.random.Generator, k: int, grid: bool) -> list[float]:
    if grid:
        return [GRID_VALUES[i] for i in rng.integers(0, len(GRID_VALUES), size=k)]
    return [float(v) for v in rng.random(k)]


def _weights(rng: np.random.Generator, k: int) -> list[float]:
    w = rng.random(k) + 1e-3
    w = w / w.sum()
    # put the rounding error on the largest weight so the total is 1 to the last bit
    w[int(np.argmax(w))] += 1.0 - math.fsum(w)
    return [float(p) for p in w]


def _random_marginal(rng: np.random.Generator, support: int, grid: bool) -> list[tuple[float, float]]:
    k = int(rng.integers(1, support + 1))
    return list(zip(_weights(rng, k), _values(rng, k, grid)))


def random_dependent(rng: np.random.Generator, n: int, max_atoms: int = 64,
                     grid: Optional[bool] = None) -> DiscreteSequence:
    """Random joint law with at most ``max_atoms`` support points.

    ``grid=True`` draws values from a five-point grid so that prefixes repeat
    and conditional expectations matter; ``None`` picks either at random.
    """
    if grid is None:
        grid = bool(rng.integers(0, 2))
    k = int(rng.integers(1, max_atoms + 1))
    atoms = [(p, tuple(_values(rng, n, grid))) for p in _weights(rng, k)]
    return DiscreteSequence(n, atoms=atoms)


def random_sequence(env: EnvironmentSpec, rng: np.random.Generator, n: Optional[int] = None,
                    max_atoms: int = 64, support: int = 4,
                    grid: Optional[bool] = None) -> DiscreteSequence:
    """Random member of ``env`` with horizon ``env.horizon`` (or ``n`` if infinite)."""
    n = env.horizon or n
    if n is None:
        raise DomainError("an infinite environment needs an explicit horizon n")
    if grid is None:
        grid = bool(rng.integers(0, 2))
    fam = env.family
    if fam is Family.GENERAL:
        return random_dependent(rng, n, max_atoms, grid)
    if fam is Family.IID:
        return DiscreteSequence(n, marginals=[_random_marginal(rng, support, grid)] * n)
    marg = [_random_marginal(rng, support, grid) for _ in range(n)]
    if fam is Family.DISCOUNTED:
        b = env.param
        marg = [[(p, v * b ** i) for p, v in m] for i, m in enumerate(marg)]
    elif fam is Family.ALPHA_BOUNDED:
        marg[0] = [(p, v * env.param) for p, v in marg[0]]
    return DiscreteSequence(n, marginals=marg)
