"""Finite discrete sequences ``X_1, ..., X_n`` with values in [0, 1].

A sequence is either a list of atoms ``(probability, values)`` with an
arbitrary joint law, or a product of independent marginals whose atoms are
expanded on demand.

Text format::

    n <horizon> independent <0|1>
    <p> <v1> ... <vn>
    ...

Lines starting with ``#`` are comments.  Numbers are written with 17
significant digits, so an atom list round-trips exactly; for a file marked
independent the marginals are rebuilt from the atoms, exact up to rounding.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property
from typing import Iterable, Sequence

from .errors import SequenceError

PROB_TOL = 1e-12
ATOM_CAP = 10**6

Atom = tuple[float, tuple[float, ...]]
Marginal = tuple[tuple[float, float], ...]  # (probability, value) pairs


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _clean_marginal(pairs: Iterable[tuple[float, float]]) -> Marginal:
    merged: dict[float, float] = {}
    for p, v in pairs:
        p, v = float(p), float(v)
        if p < 0.0:
            raise SequenceError(f"negative probability {p}")
        if not 0.0 <= v <= 1.0:
            raise SequenceError(f"value {v} outside [0, 1]")
        if p > 0.0:
            merged[v] = merged.get(v, 0.0) + p
    total = math.fsum(merged.values())
    if abs(total - 1.0) > PROB_TOL:
        raise SequenceError(f"marginal probabilities sum to {total!r}, not 1")
    return tuple((p, v) for v, p in sorted(merged.items()))


class DiscreteSequence:
    """Immutable finite-support law of a random vector in ``[0, 1]^n``."""

    def __init__(self, n: int, atoms: Sequence[Atom] | None = None,
                 marginals: Sequence[Iterable[tuple[float, float]]] | None = None):
        if n < 1 or int(n) != n:
            raise SequenceError(f"horizon must be a positive integer, got {n}")
        self.n = int(n)
        if (atoms is None) == (marginals is None):
            raise SequenceError("give exactly one of atoms or marginals")
        if marginals is not None:
            if len(marginals) != self.n:
                raise SequenceError(f"expected {self.n} marginals, got {len(marginals)}")
            self.independent = True
            self.marginals: tuple[Marginal, ...] | None = tuple(_clean_marginal(m) for m in marginals)
            self._atoms = None
        else:
            self.independent = False
            self.marginals = None
            self._atoms = self._check_atoms(atoms)

    def _check_atoms(self, atoms: Sequence[Atom]) -> tuple[Atom, ...]:
        out = []
        for p, vals in atoms:
            p = float(p)
            vals = tuple(float(v) for v in vals)
            if p < 0.0:
                raise SequenceError(f"negative probability {p}")
            if len(vals) != self.n:
                raise SequenceError(f"atom {vals} has {len(vals)} coordinates, expected {self.n}")
            if any(not 0.0 <= v <= 1.0 for v in vals):
                raise SequenceError(f"atom {vals} has a value outside [0, 1]")
            if p > 0.0:
                out.append((p, vals))
        if not out:
            raise SequenceError("no atoms with positive probability")
        total = math.fsum(p for p, _ in out)
        if abs(total - 1.0) > PROB_TOL:
            raise SequenceError(f"atom probabilities sum to {total!r}, not 1")
        return tuple(out)

    # constructors --------------------------------------------------------

    @classmethod
    def from_atoms(cls, atoms: Sequence[Atom]) -> "DiscreteSequence":
        atoms = list(atoms)
        if not atoms:
            raise SequenceError("no atoms")
        return cls(len(atoms[0][1]), atoms=atoms)

    @classmethod
    def from_marginals(cls, marginals: Sequence[Iterable[tuple[float, float]]]) -> "DiscreteSequence":
        return cls(len(marginals), marginals=list(marginals))

    @classmethod
    def constant(cls, n: int, c: float) -> "DiscreteSequence":
        return cls(n, marginals=[[(1.0, c)]] * n)

    # views ------------------------------------------------------------------

    @property
    def atom_count(self) -> int:
        if self._atoms is not None:
            return len(self._atoms)
        return math.prod(len(m) for m in self.marginals)

    @cached_property
    def atoms(self) -> tuple[Atom, ...]:
        """All support points with their probabilities (product-expanded if independent)."""
        if self._atoms is not None:
            return self._atoms
        if self.atom_count > ATOM_CAP:
            raise SequenceError(f"product support has {self.atom_count} atoms, cap is {ATOM_CAP}")
        out = []
        for combo in itertools.product(*self.marginals):
            out.append((math.prod(p for p, _ in combo), tuple(v for _, v in combo)))
        return tuple(out)

    @cached_property
    def means(self) -> tuple[float, ...]:
        if self.marginals is not None:
            return tuple(math.fsum(p * v for p, v in m) for m in self.marginals)
        return tuple(math.fsum(p * vals[i] for p, vals in self._atoms) for i in range(self.n))

    def dependent_view(self) -> "DiscreteSequence":
        """Same law, stored as an explicit atom list without the independence marker."""
        return DiscreteSequence(self.n, atoms=self.atoms)

    def __repr__(self) -> str:
        kind = "independent" if self.independent else "dependent"
        return f"DiscreteSequence(n={self.n}, {kind}, atoms={self.atom_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiscreteSequence):
            return NotImplemented
        return self.n == other.n and self.independent == other.independent and self.atoms == other.atoms

    __hash__ = None

    # text format ------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"n {self.n} independent {int(self.independent)}"]
        for p, vals in self.atoms:
            lines.append(" ".join([_fmt(p), *map(_fmt, vals)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DiscreteSequence":
        rows = [ln.split() for ln in text.splitlines()]
        rows = [r for r in rows if r and not r[0].startswith("#")]
        if not rows:
            raise SequenceError("empty sequence file")
        head = rows[0]
        if len(head) != 4 or head[0] != "n" or head[2] != "independent" or head[3] not in ("0", "1"):
            raise SequenceError(f"bad header line: {' '.join(head)!r}")
        try:
            n = int(head[1])
            atoms = [(float(r[0]), tuple(float(v) for v in r[1:])) for r in rows[1:]]
        except ValueError as exc:
            raise SequenceError(f"unparseable number: {exc}") from exc
        seq = cls(n, atoms=atoms)
        if head[3] == "1":
            return seq._as_product()
        return seq

    def _as_product(self) -> "DiscreteSequence":
        marg: list[dict[float, float]] = [{} for _ in range(self.n)]
        for p, vals in self._atoms:
            for i, v in enumerate(vals):
                marg[i][v] = marg[i].get(v, 0.0) + p
        prod = DiscreteSequence(self.n, marginals=[[(p, v) for v, p in m.items()] for m in marg])
        lookup = {vals: p for p, vals in self._atoms}
        if prod.atom_count != len(lookup):
            raise SequenceError("file is marked independent but its support is not a product")
        for p, vals in prod.atoms:
            if abs(lookup.get(vals, -1.0) - p) > PROB_TOL:
                raise SequenceError("file is marked independent but the law does not factorize")
        return prod
