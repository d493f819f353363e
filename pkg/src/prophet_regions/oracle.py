"""Exact observer values of finite discrete sequences.

``u``  best single index chosen from the means alone
``v``  optimal stopping value of a sequential observer
``w``  expected best choice after seeing the first ``j`` values
``m``  expected maximum (the prophet)

Independent sequences use their marginals directly; dependent ones are
evaluated on the tree of distinct prefixes of the support.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .boundaries import InfoPair, Level
from .errors import DomainError, TreeSizeError
from .measures import MC_BLOCK, block_generator
from .sequences import DiscreteSequence

NODE_CAP = 10**7


@dataclass(frozen=True)
class ObserverValues:
    u: float
    v: float
    m: float
    w: Optional[float] = None
    j: Optional[int] = None


@dataclass(frozen=True)
class ObserverEstimates:
    u: float
    v: float
    m: float
    u_se: float
    v_se: float
    m_se: float
    samples: int


# -- u and m -------------------------------------------------------------------

def argmax_u(seq: DiscreteSequence) -> int:
    """0-based index of the largest mean; ties go to the lowest index."""
    means = seq.means
    best = max(means)
    return means.index(best)


def eval_u(seq: DiscreteSequence) -> float:
    return max(seq.means)


def eval_m(seq: DiscreteSequence) -> float:
    if seq.independent:
        return _independent_max_mean(seq)
    return math.fsum(p * max(vals) for p, vals in seq.atoms)


def _independent_max_mean(seq: DiscreteSequence) -> float:
    # E max = sum_k z_k [F(z_k) - F(z_{k-1})] with F the product of marginal CDFs
    support = sorted({v for m in seq.marginals for _, v in m})
    total, prev = [], 0.0
    for z in support:
        cdf = math.prod(math.fsum(p for p, v in m if v <= z) for m in seq.marginals)
        total.append(z * (cdf - prev))
        prev = cdf
    return math.fsum(total)


# -- v -------------------------------------------------------------------------

def stopping_thresholds(seq: DiscreteSequence) -> list[float]:
    """Continuation values for an independent sequence: stop at step k
    (0-based) iff ``X_k >= thresholds[k]``; the last threshold is ``-inf``."""
    if not seq.independent:
        raise DomainError("thresholds exist only for independent sequences")
    cont = [-math.inf] * seq.n
    c = seq.means[-1]
    for k in range(seq.n - 2, -1, -1):
        cont[k] = c
        c = math.fsum(p * max(v, c) for p, v in seq.marginals[k])
    return cont


def _independent_value(seq: DiscreteSequence) -> float:
    c = seq.means[-1]
    for k in range(seq.n - 2, -1, -1):
        c = math.fsum(p * max(v, c) for p, v in seq.marginals[k])
    return c


def _group(indices: list[int], atoms, k: int, tol: float) -> list[list[int]]:
    if tol == 0.0:
        groups: dict[float, list[int]] = {}
        for i in indices:
            groups.setdefault(atoms[i][1][k], []).append(i)
        return list(groups.values())
    ordered = sorted(indices, key=lambda i: atoms[i][1][k])
    out: list[list[int]] = []
    for i in ordered:
        if out and atoms[i][1][k] - atoms[out[-1][0]][1][k] <= tol:
            out[-1].append(i)
        else:
            out.append([i])
    return out


def _tree_solve(seq: DiscreteSequence, tol: float, cap: int) -> tuple[float, list[float]]:
    """Backward induction over the prefix tree.

    Returns the value and, per atom, the payoff obtained by the optimal rule
    (stop as soon as the current value is at least the continuation value).
    """
    atoms = seq.atoms
    n = seq.n
    payoff = [0.0] * len(atoms)
    nodes = 0

    def mass(idx: list[int]) -> float:
        return math.fsum(atoms[i][0] for i in idx)

    def value(idx: list[int], k: int) -> float:
        # value of a node after observing k coordinates (k >= 1)
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise TreeSizeError(f"history tree exceeds {cap} nodes")
        w = mass(idx)
        current = math.fsum(atoms[i][0] * atoms[i][1][k - 1] for i in idx) / w
        if k == n:
            for i in idx:
                payoff[i] = atoms[i][1][k - 1]
            return current
        children = _group(idx, atoms, k, tol)
        cont = math.fsum(mass(c) * value(c, k + 1) for c in children) / w
        if current >= cont:
            for i in idx:
                payoff[i] = atoms[i][1][k - 1]
            return current
        return cont

    root = list(range(len(atoms)))
    total = math.fsum(mass(c) * value(c, 1) for c in _group(root, atoms, 0, tol))
    return total, payoff


def eval_v(seq: DiscreteSequence, method: str = "auto", tol: float = 0.0,
           node_cap: int = NODE_CAP) -> float:
    """Optimal stopping value ``sup_T E X_T``.

    ``method="tree"`` forces the prefix-tree recursion even for independent
    sequences (useful as a cross-check); ``tol`` merges prefix values closer
    than ``tol``.
    """
    if method not in ("auto", "tree"):
        raise DomainError(f"unknown method {method!r}")
    if seq.independent and method == "auto":
        return _independent_value(seq)
    return _tree_solve(seq, tol, node_cap)[0]


# -- w -------------------------------------------------------------------------

def eval_w(seq: DiscreteSequence, j: int) -> float:
    """``E max(X_1..X_j, E(X_{j+1} | X_1..X_j), ..., E(X_n | X_1..X_j))``."""
    if not 1 <= j < seq.n:
        raise DomainError(f"j must lie in [1, {seq.n - 1}], got {j}")
    if seq.independent:
        rest = max(seq.means[j:])
        head = DiscreteSequence(j, marginals=seq.marginals[:j])
        return math.fsum(p * max(max(vals), rest) for p, vals in head.atoms)
    groups: dict[tuple[float, ...], list[tuple[float, tuple[float, ...]]]] = {}
    for p, vals in seq.atoms:
        groups.setdefault(vals[:j], []).append((p, vals))
    total = []
    for prefix, members in groups.items():
        w = math.fsum(p for p, _ in members)
        cond = max(math.fsum(p * vals[i] for p, vals in members) / w for i in range(j, seq.n))
        total.append(w * max(max(prefix), cond))
    return math.fsum(total)


# -- composition -----------------------------------------------------------------

def observer_values(seq: DiscreteSequence, j: Optional[int] = None) -> ObserverValues:
    w = eval_w(seq, j) if j is not None else None
    return ObserverValues(eval_u(seq), eval_v(seq), eval_m(seq), w, j)


def region_point(seq: DiscreteSequence, pair: InfoPair, j: Optional[int] = None) -> tuple[float, float]:
    """``(lower observer value, prophet value)``; ``w`` uses ``j = n - 1`` by default."""
    low = pair.lower
    if low is Level.MINIMAL_U:
        x = eval_u(seq)
    elif low is Level.SEQUENTIAL_V:
        x = eval_v(seq)
    else:
        x = eval_w(seq, seq.n - 1 if j is None else j)
    return x, eval_m(seq)


# -- Monte Carlo -----------------------------------------------------------------

def _block_sums(seq: DiscreteSequence, plan, shift, seed: int, block: int, size: int) -> np.ndarray:
    rng = block_generator(seed, block)
    istar = argmax_u(seq)
    if seq.independent:
        cols = []
        for m in seq.marginals:
            probs = np.array([p for p, _ in m])
            vals = np.array([v for _, v in m])
            cols.append(vals[rng.choice(len(vals), size=size, p=probs / probs.sum())])
        x = np.column_stack(cols)
        thresholds = np.array(plan)
        stop = x >= thresholds
        first = np.argmax(stop, axis=1)
        v = x[np.arange(size), first]
        m = x.max(axis=1)
        u = x[:, istar]
    else:
        probs, maxes, at_istar, payoff = plan
        pick = rng.choice(len(probs), size=size, p=probs)
        u, v, m = at_istar[pick], payoff[pick], maxes[pick]
    out = np.empty(6)
    for k, arr in enumerate((u, v, m)):
        dev = arr - shift[k]
        out[2 * k] = dev.sum()
        out[2 * k + 1] = np.square(dev).sum()
    return out


def monte_carlo_values(seq: DiscreteSequence, samples: int, seed: int = 0,
                       threads: int = 1) -> ObserverEstimates:
    """Sample-mean estimates of ``u``, ``v`` and ``m`` with standard errors.

    ``u`` is the payoff of the fixed best-mean index and ``v`` the payoff of
    the optimal stopping rule.  Samples are drawn in fixed-size blocks with one
    stream per block, so the result depends on ``(samples, seed)`` only.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    # sums are taken around the exact values; the estimate is unchanged but a
    # constant payoff then has exactly zero spread
    shift = (eval_u(seq), eval_v(seq), eval_m(seq))
    if seq.independent:
        plan = stopping_thresholds(seq)
    else:
        _, payoff = _tree_solve(seq, 0.0, NODE_CAP)
        istar = argmax_u(seq)
        probs = np.array([p for p, _ in seq.atoms])
        plan = (probs / probs.sum(),
                np.array([max(vals) for _, vals in seq.atoms]),
                np.array([vals[istar] for _, vals in seq.atoms]),
                np.array(payoff))
    jobs = [(b, min(MC_BLOCK, samples - k)) for b, k in enumerate(range(0, samples, MC_BLOCK))]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda j: _block_sums(seq, plan, shift, seed, *j), jobs))
    else:
        parts = [_block_sums(seq, plan, shift, seed, *j) for j in jobs]
    sums = np.zeros(6)
    for part in parts:
        sums += part
    est = []
    for k in range(3):
        dev = sums[2 * k] / samples
        var = max(sums[2 * k + 1] / samples - dev * dev, 0.0) * samples / max(samples - 1, 1)
        est += [float(shift[k] + dev), math.sqrt(var / samples)]
    return ObserverEstimates(est[0], est[2], est[4], est[1], est[3], est[5], samples)
