"""
Smith normal form over the integers and the abelian invariants of a presentation.

The relation matrix of a presentation has one row per relator and one column
per generator, holding exponent sums. Its Smith normal form ``d1 | d2 | ... |
dk`` gives the abelianization ``Z^(gens - k) + Z_d1 + ... + Z_dk``, where the
entries equal to 1 drop out.

Arithmetic runs on numpy arrays of Python ints (``dtype=object``), so entries
never overflow.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .presentation import Presentation

logger = logging.getLogger("logkit.abelian")


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]  # nonzero invariant factors, d1 | d2 | ...
    rank: int

    def __post_init__(self) -> None:
        if len(self.diagonal) != self.rank:
            raise ValueError("rank must equal the number of nonzero invariant factors")


@dataclass(frozen=True)
class AbelianInvariants:
    torsion: tuple[int, ...]  # each > 1, d1 | d2 | ...
    free_rank: int

    @property
    def order(self) -> int | None:
        """Group order, or None when the free rank is positive."""
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and not self.free_rank

    def __str__(self) -> str:
        if self.is_trivial:
            return "trivial"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " x ".join(parts)

    def as_dict(self) -> dict[str, object]:
        return {"torsion": list(self.torsion), "free_rank": self.free_rank, "group": str(self)}


def _min_pivot(a: np.ndarray, t: int) -> tuple[int, int] | None:
    best: tuple[int, int] | None = None
    best_abs = 0
    rows, cols = a.shape
    for i in range(t, rows):
        for j in range(t, cols):
            v = abs(a[i, j])
            if v and (best is None or v < best_abs):
                best, best_abs = (i, j), v
                if v == 1:
                    return best
    return best


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """Invariant factors of an integer matrix by repeated minimal-pivot elimination.

    The pivot is always the entry of least absolute value in the remaining
    block; rows and columns are cleared by Euclidean steps, and a pivot that
    fails to divide the rest of the block absorbs an offending row.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("matrix rows must all have the same length")
    if not rows or not ncols:
        return SmithForm((), 0)
    a = np.empty((len(rows), ncols), dtype=object)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            a[i, j] = int(v)
    m, n = a.shape

    diagonal: list[int] = []
    for t in range(min(m, n)):
        while True:
            pos = _min_pivot(a, t)
            if pos is None:
                return SmithForm(tuple(diagonal), len(diagonal))
            i, j = pos
            a[[t, i], :] = a[[i, t], :]
            a[:, [t, j]] = a[:, [j, t]]
            pivot = a[t, t]
            clean = True
            for r in range(t + 1, m):
                q = a[r, t] // pivot
                if q:
                    a[r, :] = a[r, :] - q * a[t, :]
                clean = clean and a[r, t] == 0
            for c in range(t + 1, n):
                q = a[t, c] // pivot
                if q:
                    a[:, c] = a[:, c] - q * a[:, t]
                clean = clean and a[t, c] == 0
            if not clean:
                continue
            offender = next(
                (r for r in range(t + 1, m) for c in range(t + 1, n) if a[r, c] % pivot),
                None,
            )
            if offender is None:
                break
            a[t, :] = a[t, :] + a[offender, :]
        diagonal.append(abs(a[t, t]))
    return SmithForm(tuple(diagonal), len(diagonal))


def abelianization(p: Presentation) -> AbelianInvariants:
    snf = smith_normal_form(p.exponent_matrix()) if p.relators else SmithForm((), 0)
    torsion = tuple(d for d in snf.diagonal if d > 1)
    result = AbelianInvariants(torsion=torsion, free_rank=p.rank - snf.rank)
    logger.debug("abelianization of %d-generator presentation: %s", p.rank, result)
    return result
