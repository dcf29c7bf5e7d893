"""
Non-positive curvature of the squared complex of an injective LOG.

For a compressed injective LOG the 2-complex of its LOG-presentation is a
squared complex, and it is non-positively curved exactly when the graph avoids
two edge combinations:

- fig1: two edges, each labeled by an endpoint of the other (a 2-cycle in the
  vertex link);
- fig2: three edges whose labels chase each other's endpoints around a cycle
  (a 3-cycle in the vertex link).

A third combination, fig3 (an edge labeled x sharing an endpoint with an edge
that has x as an endpoint), is excluded by the asphericity hypotheses for the
power quotients. Orientation is ignored in all three.

The pattern scan has an independent oracle: the vertex link of the
presentation complex, whose girth must be at least four. ``check`` runs both.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass

import networkx as nx

from .log_model import Edge, LabeledOrientedGraph, ValidationReport, validate
from .presentation import Presentation, log_presentation
from .sanitize import scrub

logger = logging.getLogger("logkit.npc")

Node = tuple[str, str]  # (generator, "s" | "t")


class NotCompressedError(ValueError):
    """The pattern predicates are only the intended configurations on compressed LOGs."""


class NotCyclicallyReducedError(ValueError):
    pass


@dataclass(frozen=True)
class PatternReport:
    fig1: tuple[tuple[Edge, Edge], ...] = ()
    fig2: tuple[tuple[Edge, Edge, Edge], ...] = ()
    fig3: tuple[tuple[Edge, Edge], ...] = ()

    def as_dict(self) -> dict[str, list[list[str]]]:
        return {
            "fig1": [[str(e) for e in pair] for pair in self.fig1],
            "fig2": [[str(e) for e in triple] for triple in self.fig2],
            "fig3": [[str(e) for e in pair] for pair in self.fig3],
        }


def find_forbidden_patterns(g: LabeledOrientedGraph) -> PatternReport:
    """All fig1 pairs, fig2 triples (up to rotation) and fig3 ordered pairs of ``g``."""
    bad = [e for e in g.edges if not e.is_compressed]
    if bad:
        raise NotCompressedError(f"edge {scrub(bad[0])} is labeled by one of its endpoints")
    edges = g.edges
    # by_endpoint[v]: indices of edges having v as an endpoint
    by_endpoint: dict[str, list[int]] = defaultdict(list)
    for i, e in enumerate(edges):
        for v in e.endpoints:
            by_endpoint[v].append(i)

    def points_to(i: int) -> list[int]:
        """Edges f != e with label(e) in endpoints(f)."""
        return [j for j in by_endpoint[edges[i].label] if j != i]

    fig1 = []
    fig2 = []
    fig3 = []
    for i in range(len(edges)):
        for j in points_to(i):
            if j > i and i in points_to(j):
                fig1.append((edges[i], edges[j]))
            # rotation representative: the smallest index comes first
            if j > i:
                for k in points_to(j):
                    if k > i and k != j and i in points_to(k):
                        fig2.append((edges[i], edges[j], edges[k]))
            if edges[i].endpoints & edges[j].endpoints:
                fig3.append((edges[i], edges[j]))
    return PatternReport(tuple(fig1), tuple(fig2), tuple(fig3))


# --- Vertex link -------------------------------------------------------------


@dataclass(frozen=True)
class LinkArc:
    u: Node
    v: Node
    relator: int
    position: int  # corner between letters position and position+1 (cyclically)


@dataclass(frozen=True)
class LinkGraph:
    nodes: tuple[Node, ...]
    arcs: tuple[LinkArc, ...]

    def simple_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from((a.u, a.v) for a in self.arcs)
        return graph


def _start(gen: str, sign: int) -> Node:
    return (gen, "s") if sign == 1 else (gen, "t")


def _end(gen: str, sign: int) -> Node:
    return (gen, "t") if sign == 1 else (gen, "s")


def build_link_graph(p: Presentation) -> LinkGraph:
    """One arc per corner: from the end of each letter to the start of the next."""
    nodes = tuple(node for g in p.generators for node in ((g, "s"), (g, "t")))
    arcs: list[LinkArc] = []
    for r, rel in enumerate(p.relators):
        if not rel.is_cyclically_reduced():
            raise NotCyclicallyReducedError(f"relator {r} ({scrub(rel)}) is not cyclically reduced")
        letters = rel.letters
        for k, (gen, sign) in enumerate(letters):
            nxt_gen, nxt_sign = letters[(k + 1) % len(letters)]
            arcs.append(LinkArc(_end(gen, sign), _start(nxt_gen, nxt_sign), r, k))
    return LinkGraph(nodes, tuple(arcs))


def girth(link: LinkGraph) -> float:
    """Shortest cycle length; loops count 1, parallel arcs 2, ``math.inf`` for a forest."""
    if any(a.u == a.v for a in link.arcs):
        return 1
    pairs = Counter(frozenset((a.u, a.v)) for a in link.arcs)
    if any(count > 1 for count in pairs.values()):
        return 2
    return nx.girth(link.simple_graph())


# --- Verdict -----------------------------------------------------------------


@dataclass(frozen=True)
class Reason:
    clause: str
    witness: str

    def as_dict(self) -> dict[str, str]:
        return {"clause": self.clause, "witness": self.witness}


@dataclass(frozen=True)
class Verdict:
    npc: bool
    theorem2_applicable: bool
    reasons: tuple[Reason, ...] = ()

    def as_dict(self) -> dict[str, object]:
        return {
            "npc": self.npc,
            "theorem2_applicable": self.theorem2_applicable,
            "reasons": [r.as_dict() for r in self.reasons],
        }


def _triple(items: tuple[Edge, ...]) -> str:
    return ", ".join(f"({e})" for e in items)


def _verdict(report: ValidationReport, patterns: PatternReport | None) -> Verdict:
    reasons: list[Reason] = []
    if not report.compressed:
        reasons.append(Reason("compressed", _triple(report.uncompressed_edges)))
    if not report.injective:
        reasons.append(Reason("injective", ", ".join(report.repeated_labels)))
    if patterns is not None:
        reasons.extend(Reason("fig1", _triple(pair)) for pair in patterns.fig1)
        reasons.extend(Reason("fig2", _triple(triple)) for triple in patterns.fig2)
    npc = report.compressed and report.injective and not reasons
    if patterns is not None:
        reasons.extend(Reason("fig3", _triple(pair)) for pair in patterns.fig3)
    if not report.is_tree:
        reasons.append(Reason("tree", f"shape is {report.shape}"))
    applicable = npc and patterns is not None and not patterns.fig3 and report.is_tree
    return Verdict(npc=npc, theorem2_applicable=applicable, reasons=tuple(reasons))


def verdict(g: LabeledOrientedGraph) -> Verdict:
    report = validate(g)
    patterns = find_forbidden_patterns(g) if report.compressed else None
    return _verdict(report, patterns)


@dataclass(frozen=True)
class CheckReport:
    """Everything ``logkit check`` prints: validation, patterns, verdict, link girth."""

    validation: ValidationReport
    patterns: PatternReport | None
    verdict: Verdict
    link_girth: float | None  # None when the LOG relators are not cyclically reduced

    @property
    def oracle_agrees(self) -> bool | None:
        """Girth >= 4 against the verdict; only meaningful for compressed injective LOGs."""
        v = self.validation
        if self.link_girth is None or not (v.compressed and v.injective):
            return None
        return (self.link_girth >= 4) == self.verdict.npc

    def as_dict(self) -> dict[str, object]:
        girth_value: object = self.link_girth
        if girth_value == math.inf:
            girth_value = "inf"
        return {
            "validation": self.validation.as_dict(),
            "patterns": self.patterns.as_dict() if self.patterns is not None else None,
            "verdict": self.verdict.as_dict(),
            "link_girth": girth_value,
            "oracle_agrees": self.oracle_agrees,
        }


def check(g: LabeledOrientedGraph) -> CheckReport:
    report = validate(g)
    patterns = find_forbidden_patterns(g) if report.compressed else None
    try:
        link_girth: float | None = girth(build_link_graph(log_presentation(g)))
    except NotCyclicallyReducedError:
        link_girth = None
    result = CheckReport(report, patterns, _verdict(report, patterns), link_girth)
    logger.debug(
        "check: %d edges, npc=%s, girth=%s", len(g.edges), result.verdict.npc, link_girth
    )
    return result
