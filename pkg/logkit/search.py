"""
Exhaustive sweep over small compressed injective labeled oriented intervals.

The path 0 - 1 - ... - (k-1) is fixed, so every LOI on k vertices is a label
assignment plus one orientation per edge. Reversing the path is the only
renaming that keeps it fixed; an instance is kept only when its code is no
larger than the code of its reversal. Each instance gets the pattern verdict
and the link-girth cross-check.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import asdict, dataclass

import pandas as pd

from . import config
from .log_model import Edge, InvalidParameterError, LabeledOrientedGraph
from .npc import check

logger = logging.getLogger("logkit.search")

Code = tuple[tuple[int, bool], ...]  # per edge i: (label, points from i to i+1)
_COLUMNS = ("vertices", "lois", "npc", "theorem2_applicable", "oracle_agrees")


def _reversal(code: Code) -> Code:
    k = len(code) + 1
    return tuple((k - 1 - code[k - 2 - i][0], not code[k - 2 - i][1]) for i in range(k - 1))


def _loi(code: Code) -> LabeledOrientedGraph:
    k = len(code) + 1
    edges = []
    for i, (label, forward) in enumerate(code):
        lo, hi = str(i), str(i + 1)
        edges.append(Edge(lo, str(label), hi) if forward else Edge(hi, str(label), lo))
    return LabeledOrientedGraph(tuple(str(v) for v in range(k)), tuple(edges))


def enumerate_lois(k: int) -> Iterator[LabeledOrientedGraph]:
    """Compressed injective LOIs on k vertices, one per path-reversal class."""
    if k < 2:
        raise InvalidParameterError(f"an interval needs at least two vertices, got {k}")
    for labels in itertools.permutations(range(k), k - 1):
        if any(label in (i, i + 1) for i, label in enumerate(labels)):
            continue
        for orientation in itertools.product((True, False), repeat=k - 1):
            code: Code = tuple(zip(labels, orientation))
            if code <= _reversal(code):
                yield _loi(code)


@dataclass(frozen=True)
class SearchRow:
    vertices: int
    lois: int
    npc: int
    theorem2_applicable: int
    oracle_agrees: int


@dataclass(frozen=True)
class SearchSummary:
    rows: tuple[SearchRow, ...]
    disagreements: tuple[LabeledOrientedGraph, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame([asdict(r) for r in self.rows], columns=list(_COLUMNS))
        return frame.set_index("vertices")

    def as_dict(self) -> dict[str, object]:
        return {
            "rows": [asdict(r) for r in self.rows],
            "disagreements": [[str(e) for e in g.edges] for g in self.disagreements],
            "ok": self.ok,
        }


def search_small_lois(max_vertices: int = config.SEARCH_DEFAULT_MAX_VERTICES) -> SearchSummary:
    if max_vertices > config.SEARCH_MAX_VERTICES_CEILING:
        raise InvalidParameterError(
            f"max_vertices {max_vertices} is above the ceiling "
            f"{config.SEARCH_MAX_VERTICES_CEILING}"
        )
    if max_vertices < 2:
        raise InvalidParameterError(f"max_vertices must be >= 2, got {max_vertices}")

    rows = []
    disagreements: list[LabeledOrientedGraph] = []
    for k in range(2, max_vertices + 1):
        total = npc = applicable = agrees = 0
        for g in enumerate_lois(k):
            report = check(g)
            total += 1
            npc += report.verdict.npc
            applicable += report.verdict.theorem2_applicable
            if report.oracle_agrees:
                agrees += 1
            else:
                disagreements.append(g)
        logger.info("k=%d: %d LOIs, %d npc, %d applicable", k, total, npc, applicable)
        rows.append(SearchRow(k, total, npc, applicable, agrees))
    if disagreements:
        logger.error(
            "%d LOIs where the pattern verdict and link girth disagree", len(disagreements)
        )
    return SearchSummary(tuple(rows), tuple(disagreements))
