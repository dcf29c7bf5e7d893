"""
Labeled oriented graphs (LOGs): the combinatorial encoding of a knot group.

An edge ``(a|b|c)`` runs from ``a`` to ``c`` and carries the vertex ``b`` as its
label. A LOG whose underlying graph is a tree is a LOT; a LOT whose tree is a
path is a LOI. This module owns the value types, the text format, the two
hypotheses every later check starts from (compressed, injective), the shape of
the underlying graph, and a few generators:

- ``cyclic_shift_family(n)``: the interval on 0..n-1 whose edge i -> i+1 is
  labeled ``(i+3) mod n``;
- ``random_tree(k, rng)``: random LOTs for property sweeps;
- ``collapse_order(t, z)``: an order in which a tree collapses onto ``z``.

Text format: one edge per line as ``source | label | target``; ``#`` starts a
comment line; blank lines are ignored. The canonical serialization prepends a
``# vertices: ...`` directive so vertex order and label-only or isolated
vertices survive a round trip; other readers see an ordinary comment.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .sanitize import is_valid_name, scrub

logger = logging.getLogger("logkit.log_model")

SHAPES = ("Interval", "Tree", "Forest", "HasCycle")
_VERTICES_DIRECTIVE = "# vertices:"


class LogParseError(ValueError):
    """Input text is not in the LOG format."""


class EmptyInputError(LogParseError):
    """The input holds no edges and no declared vertices."""


class MalformedLineError(LogParseError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {scrub(line)!r}")
        self.lineno = lineno


class DuplicateEdgeError(LogParseError):
    """The same (source, label, target) triple appears twice."""


class GraphError(ValueError):
    """A LabeledOrientedGraph invariant does not hold."""


class InvalidParameterError(ValueError):
    """A generator was called with a parameter outside its range."""


class NotATreeError(ValueError):
    """The operation needs a tree but the underlying graph is not one."""


class UnknownVertexError(ValueError):
    """A vertex name does not belong to the graph."""


@dataclass(frozen=True)
class Edge:
    """An oriented edge from ``source`` to ``target`` labeled by the vertex ``label``."""

    source: str
    label: str
    target: str

    @property
    def endpoints(self) -> frozenset[str]:
        return frozenset((self.source, self.target))

    @property
    def is_compressed(self) -> bool:
        return self.label not in self.endpoints

    def __str__(self) -> str:
        return f"{self.source}|{self.label}|{self.target}"

    def canonical(self) -> str:
        return f"{self.source} | {self.label} | {self.target}"


@dataclass(frozen=True)
class LabeledOrientedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        if not self.vertices:
            raise GraphError("a labeled oriented graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            dup = next(v for v, c in Counter(self.vertices).items() if c > 1)
            raise GraphError(f"duplicate vertex name {scrub(dup)!r}")
        known = set(self.vertices)
        seen: set[Edge] = set()
        for e in self.edges:
            missing = [v for v in (e.source, e.label, e.target) if v not in known]
            if missing:
                raise GraphError(f"edge {scrub(e)} uses unknown vertex {scrub(missing[0])!r}")
            if e in seen:
                raise GraphError(f"duplicate edge {scrub(e)}")
            seen.add(e)

    @classmethod
    def from_edges(
        cls, edges: Iterable[Edge], vertices: Iterable[str] = ()
    ) -> LabeledOrientedGraph:
        """Build a graph whose vertex order is ``vertices`` then first appearance in ``edges``."""
        edge_list = tuple(edges)
        order: dict[str, None] = dict.fromkeys(vertices)
        for e in edge_list:
            for v in (e.source, e.label, e.target):
                order.setdefault(v, None)
        return cls(tuple(order), edge_list)

    def labels(self) -> list[str]:
        return [e.label for e in self.edges]

    def underlying_graph(self) -> nx.MultiGraph:
        """Undirected multigraph on all vertices with one edge per LOG edge; labels ignored."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for i, e in enumerate(self.edges):
            graph.add_edge(e.source, e.target, key=i)
        return graph


@dataclass(frozen=True)
class ValidationReport:
    compressed: bool
    uncompressed_edges: tuple[Edge, ...]
    injective: bool
    repeated_labels: tuple[str, ...]
    shape: str
    connected: bool

    @property
    def is_tree(self) -> bool:
        return self.shape in ("Interval", "Tree")

    def as_dict(self) -> dict[str, object]:
        return {
            "compressed": self.compressed,
            "uncompressed_edges": [str(e) for e in self.uncompressed_edges],
            "injective": self.injective,
            "repeated_labels": list(self.repeated_labels),
            "shape": self.shape,
            "connected": self.connected,
        }


# --- Text format -------------------------------------------------------------


def parse_log(text: str) -> LabeledOrientedGraph:
    """Parse the LOG text format; vertices come out in first-appearance order."""
    declared: list[str] = []
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(_VERTICES_DIRECTIVE):
                declared.extend(_parse_directive(lineno, line, declared))
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise MalformedLineError(lineno, raw, "expected 'source | label | target'")
        for token in parts:
            if not is_valid_name(token):
                raise MalformedLineError(lineno, raw, f"invalid vertex name {scrub(token)!r}")
        edge = Edge(*parts)
        if edge in seen:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {scrub(edge)}")
        seen.add(edge)
        edges.append(edge)
    if not edges and not declared:
        raise EmptyInputError("no edges or vertices in input")
    graph = LabeledOrientedGraph.from_edges(edges, declared)
    logger.debug("parsed LOG: %d vertices, %d edges", len(graph.vertices), len(graph.edges))
    return graph


def _parse_directive(lineno: int, line: str, declared: list[str]) -> list[str]:
    names = line[len(_VERTICES_DIRECTIVE) :].split()
    for name in names:
        if not is_valid_name(name):
            raise MalformedLineError(lineno, line, f"invalid vertex name {scrub(name)!r}")
    dupes = (set(names) & set(declared)) | {n for n, c in Counter(names).items() if c > 1}
    if dupes:
        raise MalformedLineError(lineno, line, f"vertex {sorted(dupes)[0]!r} declared twice")
    return names


def serialize_log(g: LabeledOrientedGraph) -> str:
    """Canonical text: the vertices directive, then one ``a | b | c`` line per edge."""
    lines = [f"{_VERTICES_DIRECTIVE} {' '.join(g.vertices)}"]
    lines.extend(e.canonical() for e in g.edges)
    return "\n".join(lines) + "\n"


# --- Validation --------------------------------------------------------------


def _shape(g: LabeledOrientedGraph) -> tuple[str, bool]:
    graph = g.underlying_graph()
    connected = nx.is_connected(graph)
    if not nx.is_forest(graph):
        return "HasCycle", connected
    if not connected:
        return "Forest", connected
    if max((d for _, d in graph.degree()), default=0) <= 2:
        return "Interval", connected
    return "Tree", connected


def validate(g: LabeledOrientedGraph) -> ValidationReport:
    """Compressedness, injectivity, and shape of the underlying undirected graph."""
    uncompressed = tuple(e for e in g.edges if not e.is_compressed)
    counts = Counter(g.labels())
    repeated = tuple(label for label in dict.fromkeys(g.labels()) if counts[label] > 1)
    shape, connected = _shape(g)
    return ValidationReport(
        compressed=not uncompressed,
        uncompressed_edges=uncompressed,
        injective=not repeated,
        repeated_labels=repeated,
        shape=shape,
        connected=connected,
    )


# --- Generators --------------------------------------------------------------


def cyclic_shift_family(n: int) -> LabeledOrientedGraph:
    """The interval 0 - 1 - ... - (n-1) whose edge i -> i+1 carries the label (i+3) mod n."""
    if n < 2:
        raise InvalidParameterError(f"cyclic shift family needs n >= 2, got {n}")
    vertices = tuple(str(i) for i in range(n))
    edges = tuple(Edge(str(i), str((i + 3) % n), str(i + 1)) for i in range(n - 1))
    return LabeledOrientedGraph(vertices, edges)


def random_tree(
    n_vertices: int, rng: np.random.Generator, compressed: bool = False
) -> LabeledOrientedGraph:
    """A random LOT on vertices 0..n-1.

    Vertex i attaches to a uniformly chosen earlier vertex with a random
    orientation; labels are uniform over all vertices, or over the vertices
    off the edge when ``compressed`` (which needs at least three vertices).
    """
    if n_vertices < 1:
        raise InvalidParameterError(f"random tree needs at least one vertex, got {n_vertices}")
    if compressed and n_vertices == 2:
        raise InvalidParameterError("a compressed tree on two vertices does not exist")
    names = [str(i) for i in range(n_vertices)]
    edges: list[Edge] = []
    for i in range(1, n_vertices):
        parent = int(rng.integers(i))
        pool = [v for v in range(n_vertices) if not compressed or v not in (i, parent)]
        label = names[pool[int(rng.integers(len(pool)))]]
        if rng.random() < 0.5:
            edges.append(Edge(names[parent], label, names[i]))
        else:
            edges.append(Edge(names[i], label, names[parent]))
    return LabeledOrientedGraph(tuple(names), tuple(edges))


def relabel(g: LabeledOrientedGraph, mapping: Mapping[str, str]) -> LabeledOrientedGraph:
    """Apply a renaming bijection; names missing from ``mapping`` are kept."""
    image = [mapping.get(v, v) for v in g.vertices]
    if len(set(image)) != len(image):
        raise InvalidParameterError("renaming is not injective on the vertex set")

    def ren(v: str) -> str:
        return mapping.get(v, v)

    edges = tuple(Edge(ren(e.source), ren(e.label), ren(e.target)) for e in g.edges)
    return LabeledOrientedGraph(tuple(image), edges)


# --- Tree collapse -----------------------------------------------------------


def collapse_order(t: LabeledOrientedGraph, z: str) -> list[Edge]:
    """Edges in an order that collapses the tree onto ``z``, farthest leaf first.

    Each edge is keyed by the depth of its endpoint away from ``z``; removing
    the deepest remaining edge always removes a current leaf. Ties keep the
    later edge first so a path collapses from its far end.
    """
    if z not in t.vertices:
        raise UnknownVertexError(f"vertex {scrub(z)!r} is not in the graph")
    report = validate(t)
    if not report.is_tree:
        raise NotATreeError(f"collapse needs a tree, got shape {report.shape}")
    depth = nx.single_source_shortest_path_length(t.underlying_graph(), z)
    keyed = [(max(depth[e.source], depth[e.target]), i, e) for i, e in enumerate(t.edges)]
    keyed.sort(key=lambda item: (-item[0], -item[1]))
    return [e for _, _, e in keyed]
