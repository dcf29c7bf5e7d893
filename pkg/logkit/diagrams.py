"""
Surface diagrams over LOG-presentations and their combinatorial curvature.

A diagram is a cell structure on a compact orientable surface. Edges carry a
generator and an orientation; each face lists its boundary as directed edge
references ("darts") ``(edge id, +1 | -1)`` in clockwise order, with a sign
(+1 when it reads a relator, -1 when it reads a relator's inverse) and a
basepoint (the dart the reading starts at).

Corner k of a face sits at the vertex where dart k starts. Angles are keyed by
``(face id, k)``, with k an index into the boundary list (not relative to the
basepoint). Every angle and curvature value is a ``Fraction``:

- interior vertex: ``2 - sum of angles``; boundary vertex: ``1 - sum``;
- face with m sides: ``sum of angles - (m - 2)``;
- the totals add to ``2 * (V - E + F)``.

The only move implemented is cancellation of a mirror pair of faces.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import networkx as nx
from networkx.utils import UnionFind

from .log_model import Edge
from .presentation import Presentation, Word, edge_relator
from .sanitize import scrub

logger = logging.getLogger("logkit.diagrams")

Dart = tuple[int, int]  # (edge id, +1 | -1)
Corner = tuple[int, int]  # (face id, boundary index)
AngleAssignment = Mapping[Corner, Fraction]

FACE_KINDS = ("power", "square", "other")


class DiagramError(ValueError):
    """A SurfaceDiagram is structurally malformed, or an operation's precondition fails."""


class DegenerateError(DiagramError):
    """The requested canonical diagram would need a face the data model cannot hold."""


class AngleError(DiagramError):
    """An angle assignment does not cover every corner exactly once."""


class NonSurfaceResultError(DiagramError):
    def __init__(self, message: str, diagram: SurfaceDiagram) -> None:
        super().__init__(message)
        self.diagram = diagram


@dataclass(frozen=True)
class DEdge:
    id: int
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Dart, ...]
    sign: int
    basepoint: int = 0

    def __post_init__(self) -> None:
        if not self.boundary:
            raise DiagramError(f"face {self.id} has an empty boundary")
        if self.sign not in (1, -1):
            raise DiagramError(f"face {self.id}: sign must be +1 or -1, got {self.sign}")
        if not 0 <= self.basepoint < len(self.boundary):
            raise DiagramError(f"face {self.id}: basepoint {self.basepoint} out of range")
        if any(d not in (1, -1) for _, d in self.boundary):
            raise DiagramError(f"face {self.id}: dart directions must be +1 or -1")


@dataclass(frozen=True)
class SurfaceDiagram:
    """Vertices, edges and faces, kept sorted by id.

    Construction checks structure only: ids unique, darts name real edges, and
    consecutive darts of a face meet at a vertex. The surface and relator
    conditions are reported by ``validate_diagram``.
    """

    vertices: tuple[int, ...] = ()
    edges: tuple[DEdge, ...] = ()
    faces: tuple[Face, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "faces", tuple(sorted(self.faces, key=lambda f: f.id)))
        for kind, ids in (
            ("vertex", self.vertices),
            ("edge", [e.id for e in self.edges]),
            ("face", [f.id for f in self.faces]),
        ):
            dup = [i for i, c in Counter(ids).items() if c > 1]
            if dup:
                raise DiagramError(f"duplicate {kind} id {dup[0]}")
        known = set(self.vertices)
        for e in self.edges:
            if e.source not in known or e.target not in known:
                raise DiagramError(f"edge {e.id} has an endpoint that is not a vertex")
        for f in self.faces:
            for e, _ in f.boundary:
                if e not in self.edge_map:
                    raise DiagramError(f"face {f.id} uses unknown edge {e}")
            for k, dart in enumerate(f.boundary):
                nxt = f.boundary[(k + 1) % len(f.boundary)]
                if self.dart_end(dart) != self.dart_start(nxt):
                    raise DiagramError(f"face {f.id}: darts {k} and {k + 1} do not meet")

    @cached_property
    def edge_map(self) -> dict[int, DEdge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def face_map(self) -> dict[int, Face]:
        return {f.id: f for f in self.faces}

    def dart_start(self, dart: Dart) -> int:
        e = self.edge_map[dart[0]]
        return e.source if dart[1] == 1 else e.target

    def dart_end(self, dart: Dart) -> int:
        e = self.edge_map[dart[0]]
        return e.target if dart[1] == 1 else e.source

    def corner_vertex(self, corner: Corner) -> int:
        face_id, k = corner
        return self.dart_start(self.face_map[face_id].boundary[k])

    def corners(self) -> list[Corner]:
        return [(f.id, k) for f in self.faces for k in range(len(f.boundary))]

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.edges and not self.faces

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)


# --- Words and faces ---------------------------------------------------------


def _letter(s: SurfaceDiagram, dart: Dart) -> tuple[str, int]:
    return s.edge_map[dart[0]].label, dart[1]


def read_word(s: SurfaceDiagram, face_id: int, corner: int | None = None) -> Word:
    """Clockwise boundary word of a face, from its basepoint or from ``corner``."""
    f = s.face_map[face_id]
    start = f.basepoint if corner is None else corner
    m = len(f.boundary)
    return Word(tuple(_letter(s, f.boundary[(start + i) % m]) for i in range(m)))


def anticlockwise_word(s: SurfaceDiagram, face_id: int, corner: int) -> Word:
    return read_word(s, face_id, corner).inverse()


def classify_word(word: Word) -> str:
    power = word.single_generator_power()
    if power is not None and len(word) >= 2:
        return "power"
    if len(word) == 4:
        return "square"
    return "other"


def _dart_positions(s: SurfaceDiagram) -> dict[Dart, Corner]:
    return {dart: (f.id, k) for f in s.faces for k, dart in enumerate(f.boundary)}


def _flip(dart: Dart) -> Dart:
    return dart[0], -dart[1]


def _successor(
    s: SurfaceDiagram, positions: Mapping[Dart, Corner], corner: Corner
) -> Corner | None:
    """Next corner around the same vertex, across the outgoing dart; None at the boundary."""
    face_id, k = corner
    hit = positions.get(_flip(s.face_map[face_id].boundary[k]))
    if hit is None:
        return None
    other, j = hit
    return other, (j + 1) % len(s.face_map[other].boundary)


def _corner_orbits(s: SurfaceDiagram, positions: Mapping[Dart, Corner]) -> list[set[Corner]]:
    graph = nx.Graph()
    graph.add_nodes_from(s.corners())
    for c in s.corners():
        nxt = _successor(s, positions, c)
        if nxt is not None:
            graph.add_edge(c, nxt)
    return [set(orbit) for orbit in nx.connected_components(graph)]


def _unmatched_darts(s: SurfaceDiagram) -> list[Dart]:
    used = {dart for f in s.faces for dart in f.boundary}
    return [dart for dart in sorted(used) if _flip(dart) not in used]


def boundary_vertices(s: SurfaceDiagram) -> set[int]:
    out: set[int] = set()
    for dart in _unmatched_darts(s):
        out.add(s.dart_start(dart))
        out.add(s.dart_end(dart))
    return out


def is_connected(s: SurfaceDiagram) -> bool:
    if not s.vertices:
        return True
    graph = nx.MultiGraph()
    graph.add_nodes_from(s.vertices)
    graph.add_edges_from((e.source, e.target) for e in s.edges)
    return nx.is_connected(graph)


# --- Validation --------------------------------------------------------------


@dataclass(frozen=True)
class DiagramValidity:
    valid: bool
    closed: bool
    face_kinds: dict[int, str] = field(default_factory=dict)
    failures: tuple[str, ...] = ()
    witness_faces: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.valid

    def as_dict(self) -> dict[str, object]:
        return {
            "valid": self.valid,
            "closed": self.closed,
            "face_kinds": {str(k): v for k, v in self.face_kinds.items()},
            "failures": list(self.failures),
            "witness_faces": list(self.witness_faces),
        }


def validate_diagram(s: SurfaceDiagram, p: Presentation) -> DiagramValidity:
    """Edge usage, boundary words against ``p``, connectivity, and one corner orbit per vertex."""
    failures: list[str] = []
    witnesses: list[int] = []

    usage = Counter(dart for f in s.faces for dart in f.boundary)
    for dart, count in sorted(usage.items()):
        if count > 1:
            failures.append(f"edge {dart[0]} is used {count} times in direction {dart[1]:+d}")
    for e in s.edges:
        if not usage[(e.id, 1)] and not usage[(e.id, -1)]:
            failures.append(f"edge {e.id} is on no face")

    relators = {rel.letters for rel in p.relators}
    inverses = {rel.inverse().letters for rel in p.relators}
    kinds: dict[int, str] = {}
    for f in s.faces:
        word = read_word(s, f.id)
        kinds[f.id] = classify_word(word)
        if word.letters not in (relators if f.sign == 1 else inverses):
            failures.append(
                f"face {f.id} reads {scrub(word)}, not a relator"
                + ("" if f.sign == 1 else " inverse")
            )
            witnesses.append(f.id)

    if not is_connected(s):
        failures.append("diagram is not connected")

    if not failures:
        positions = _dart_positions(s)
        orbits = _corner_orbits(s, positions)
        per_vertex = Counter(s.corner_vertex(next(iter(orbit))) for orbit in orbits)
        for v, count in sorted(per_vertex.items()):
            if count > 1:
                failures.append(f"vertex {v} is a pinch: its corners form {count} cycles")

    closed = not _unmatched_darts(s)
    result = DiagramValidity(not failures, closed, kinds, tuple(failures), tuple(witnesses))
    logger.debug(
        "validate_diagram: valid=%s closed=%s faces=%d", result.valid, closed, len(s.faces)
    )
    return result


# --- Angles and curvature ----------------------------------------------------


def regular_angles(s: SurfaceDiagram) -> dict[Corner, Fraction]:
    """1/2 on every square corner, (n - 2)/n on every corner of an n-gon power face."""
    angles: dict[Corner, Fraction] = {}
    for f in s.faces:
        kind = classify_word(read_word(s, f.id))
        if kind == "other":
            raise AngleError(f"face {f.id} is neither a square nor a power face")
        m = len(f.boundary)
        angle = Fraction(1, 2) if kind == "square" else Fraction(m - 2, m)
        for k in range(m):
            angles[(f.id, k)] = angle
    return angles


_ANGLE_SCHEMES = {"regular": regular_angles}


def _resolve_angles(s: SurfaceDiagram, angles: AngleAssignment | str) -> dict[Corner, Fraction]:
    if isinstance(angles, str):
        try:
            scheme = _ANGLE_SCHEMES[angles]
        except KeyError:
            raise ValueError(
                f"unknown angle scheme {angles!r}; expected one of {sorted(_ANGLE_SCHEMES)}"
            ) from None
        return scheme(s)
    corners = set(s.corners())
    missing = sorted(corners - set(angles))
    if missing:
        raise AngleError(f"no angle for corner {missing[0]}")
    extra = sorted(set(angles) - corners)
    if extra:
        raise AngleError(f"angle given for unknown corner {extra[0]}")
    resolved = {}
    for corner, value in angles.items():
        if isinstance(value, float):
            raise AngleError(f"angle at {corner} is a float; use an exact rational")
        resolved[corner] = Fraction(value)
    return resolved


@dataclass(frozen=True)
class VertexCurvature:
    vertex: int
    valency: int
    boundary: bool
    power_faces: int
    kappa: Fraction

    @property
    def kappa_tilde(self) -> Fraction | None:
        """Curvature shared out over the incident power faces."""
        if not self.power_faces:
            return None
        return self.kappa / self.power_faces

    def as_dict(self) -> dict[str, object]:
        tilde = self.kappa_tilde
        return {
            "vertex": self.vertex,
            "valency": self.valency,
            "boundary": self.boundary,
            "power_faces": self.power_faces,
            "kappa": str(self.kappa),
            "kappa_tilde": None if tilde is None else str(tilde),
        }


@dataclass(frozen=True)
class CurvatureReport:
    vertices: tuple[VertexCurvature, ...]
    faces: dict[int, Fraction]
    euler_characteristic: int
    power_face_sums: dict[int, Fraction] = field(default_factory=dict)

    @property
    def vertex_total(self) -> Fraction:
        return sum((v.kappa for v in self.vertices), Fraction(0))

    @property
    def face_total(self) -> Fraction:
        return sum(self.faces.values(), Fraction(0))

    @property
    def total(self) -> Fraction:
        return self.vertex_total + self.face_total

    @property
    def gauss_bonnet_holds(self) -> bool:
        return self.total == 2 * self.euler_characteristic

    def vertex(self, v: int) -> VertexCurvature:
        for entry in self.vertices:
            if entry.vertex == v:
                return entry
        raise KeyError(v)

    def as_dict(self) -> dict[str, object]:
        return {
            "vertices": [v.as_dict() for v in self.vertices],
            "faces": {str(k): str(v) for k, v in self.faces.items()},
            "power_face_sums": {str(k): str(v) for k, v in self.power_face_sums.items()},
            "vertex_total": str(self.vertex_total),
            "face_total": str(self.face_total),
            "total": str(self.total),
            "euler_characteristic": self.euler_characteristic,
            "gauss_bonnet_holds": self.gauss_bonnet_holds,
        }


def curvature_report(
    s: SurfaceDiagram, angles: AngleAssignment | str = "regular"
) -> CurvatureReport:
    resolved = _resolve_angles(s, angles)
    on_boundary = boundary_vertices(s)

    valency: Counter[int] = Counter()
    for e in s.edges:
        valency[e.source] += 1
        valency[e.target] += 1

    angle_sum: defaultdict[int, Fraction] = defaultdict(Fraction)
    power_at: defaultdict[int, set[int]] = defaultdict(set)
    face_kappa: dict[int, Fraction] = {}
    power_ids: list[int] = []
    for f in s.faces:
        is_power = classify_word(read_word(s, f.id)) == "power"
        if is_power:
            power_ids.append(f.id)
        total = Fraction(0)
        for k in range(len(f.boundary)):
            v = s.corner_vertex((f.id, k))
            angle = resolved[(f.id, k)]
            angle_sum[v] += angle
            total += angle
            if is_power:
                power_at[v].add(f.id)
        face_kappa[f.id] = total - (len(f.boundary) - 2)

    entries = []
    for v in s.vertices:
        base = 1 if v in on_boundary else 2
        entries.append(
            VertexCurvature(
                vertex=v,
                valency=valency[v],
                boundary=v in on_boundary,
                power_faces=len(power_at[v]),
                kappa=base - angle_sum[v],
            )
        )
    by_vertex = {entry.vertex: entry for entry in entries}

    sums: dict[int, Fraction] = {}
    for fid in power_ids:
        around = {s.corner_vertex((fid, k)) for k in range(len(s.face_map[fid].boundary))}
        sums[fid] = sum((by_vertex[v].kappa_tilde or Fraction(0) for v in around), Fraction(0))

    report = CurvatureReport(tuple(entries), face_kappa, s.euler_characteristic, sums)
    logger.debug("curvature: total=%s chi=%d", report.total, report.euler_characteristic)
    return report


# --- Canonical diagrams ------------------------------------------------------


def canonical_power_sphere(g: str, n: int) -> SurfaceDiagram:
    """Two n-gons reading g^n, glued along their boundary; basepoints one edge apart."""
    if n < 2:
        raise DegenerateError(f"a power sphere needs n >= 2, got {n}")
    vertices = tuple(range(n))
    edges = tuple(DEdge(i, g, i, (i + 1) % n) for i in range(n))
    top = Face(0, tuple((i, 1) for i in range(n)), sign=1, basepoint=0)
    bottom = Face(1, tuple((i, -1) for i in reversed(range(n))), sign=-1, basepoint=n - 1)
    return SurfaceDiagram(vertices, edges, (top, bottom))


def canonical_edge_sphere(e: Edge, n: int) -> SurfaceDiagram:
    """A ring of n squares for ``e`` capped by power faces a^n (bottom) and c^n (top).

    Bottom vertices are 0..n-1 and top vertices n..2n-1. Edge i (label a) and
    edge n + i (label c) run around the bottom and top rings; edge 2n + i
    (label b) climbs from bottom vertex i to top vertex n + i. Each square's
    basepoint is its corner on the bottom ring.
    """
    if not e.is_compressed:
        raise DegenerateError(f"edge {scrub(e)} is labeled by one of its endpoints")
    if n < 2:
        raise DegenerateError(f"an edge sphere needs n >= 2, got {n}")
    a, b, c = e.source, e.label, e.target
    edges = [DEdge(i, a, i, (i + 1) % n) for i in range(n)]
    edges += [DEdge(n + i, c, n + i, n + (i + 1) % n) for i in range(n)]
    edges += [DEdge(2 * n + i, b, i, n + i) for i in range(n)]
    faces = [
        Face(i, ((i, 1), (2 * n + (i + 1) % n, 1), (n + i, -1), (2 * n + i, -1)), sign=1)
        for i in range(n)
    ]
    faces.append(Face(n, tuple((i, -1) for i in reversed(range(n))), sign=-1, basepoint=0))
    faces.append(Face(n + 1, tuple((n + i, 1) for i in range(n)), sign=1, basepoint=0))
    return SurfaceDiagram(tuple(range(2 * n)), tuple(edges), tuple(faces))


def edge_sphere_presentation(e: Edge, n: int) -> Presentation:
    """The presentation an edge sphere is read against: r_e, a^n, c^n."""
    gens = tuple(dict.fromkeys((e.source, e.label, e.target)))
    rels = (
        edge_relator(e.source, e.label, e.target),
        Word.power(e.source, n),
        Word.power(e.target, n),
    )
    return Presentation(gens, rels)


def face_disc(word: Word, sign: int = 1) -> SurfaceDiagram:
    """A single face reading ``word`` clockwise from vertex 0; every side on the boundary."""
    if not word:
        raise DegenerateError("a face needs a nonempty boundary word")
    m = len(word)
    edges = []
    darts = []
    for i, (gen, s) in enumerate(word):
        nxt = (i + 1) % m
        edges.append(DEdge(i, gen, i, nxt) if s == 1 else DEdge(i, gen, nxt, i))
        darts.append((i, s))
    return SurfaceDiagram(tuple(range(m)), tuple(edges), (Face(0, tuple(darts), sign),))


def torus_presentation() -> Presentation:
    return Presentation(("x", "y"), (edge_relator("x", "y", "x"),))


def torus_grid(m: int, k: int) -> SurfaceDiagram:
    """An m x k grid of commutator squares x y x^-1 y^-1 with opposite sides identified."""
    if m < 2 or k < 2:
        raise DegenerateError(f"a torus grid needs m, k >= 2, got {m} x {k}")

    def vid(r: int, c: int) -> int:
        return (r % m) * k + (c % k)

    def x_edge(r: int, c: int) -> int:
        return vid(r, c)

    def y_edge(r: int, c: int) -> int:
        return m * k + vid(r, c)

    cells = [(r, c) for r in range(m) for c in range(k)]
    edges = [DEdge(x_edge(r, c), "x", vid(r, c), vid(r, c + 1)) for r, c in cells]
    edges += [DEdge(y_edge(r, c), "y", vid(r, c), vid(r + 1, c)) for r, c in cells]
    faces = [
        Face(
            vid(r, c),
            ((x_edge(r, c), 1), (y_edge(r, c + 1), 1), (x_edge(r + 1, c), -1), (y_edge(r, c), -1)),
            sign=1,
        )
        for r in range(m)
        for c in range(k)
    ]
    return SurfaceDiagram(tuple(range(m * k)), tuple(edges), tuple(faces))


def remove_faces(s: SurfaceDiagram, face_ids: Iterable[int]) -> SurfaceDiagram:
    """Cut faces out; edges and vertices left on no face go with them."""
    drop = set(face_ids)
    unknown = drop - set(s.face_map)
    if unknown:
        raise DiagramError(f"no face with id {min(unknown)}")
    faces = tuple(f for f in s.faces if f.id not in drop)
    used = {e for f in faces for e, _ in f.boundary}
    edges = tuple(e for e in s.edges if e.id in used)
    vertices = {v for e in edges for v in (e.source, e.target)}
    return SurfaceDiagram(tuple(vertices), edges, faces)


def mirror_double(s: SurfaceDiagram) -> SurfaceDiagram:
    """Glue a diagram with boundary to its mirror image along the boundary.

    Boundary edges and vertices are shared; interior ones are copied. Each
    mirror face reads the inverse word with the opposite sign.
    """
    unmatched = _unmatched_darts(s)
    if not unmatched:
        raise DiagramError("mirror_double needs a diagram with boundary")
    on_boundary = boundary_vertices(s)
    boundary_edges = {e for e, _ in unmatched}
    v_shift = max(s.vertices) + 1
    e_shift = max(e.id for e in s.edges) + 1
    f_shift = max(f.id for f in s.faces) + 1

    def vmap(v: int) -> int:
        return v if v in on_boundary else v + v_shift

    def emap(e: int) -> int:
        return e if e in boundary_edges else e + e_shift

    vertices = set(s.vertices) | {vmap(v) for v in s.vertices}
    edges = list(s.edges)
    edges += [
        DEdge(emap(e.id), e.label, vmap(e.source), vmap(e.target))
        for e in s.edges
        if e.id not in boundary_edges
    ]
    faces = list(s.faces)
    for f in s.faces:
        m = len(f.boundary)
        darts = tuple((emap(e), -d) for e, d in reversed(f.boundary))
        faces.append(Face(f.id + f_shift, darts, -f.sign, (m - f.basepoint) % m))
    return SurfaceDiagram(tuple(vertices), tuple(edges), tuple(faces))


# --- Cancellation ------------------------------------------------------------


@dataclass(frozen=True)
class CancellationPair:
    """Faces ``face`` < ``other`` reading the same word from ``vertex``, in opposite senses."""

    face: int
    other: int
    vertex: int
    corner: int
    other_corner: int

    def as_dict(self) -> dict[str, int]:
        return {
            "face": self.face,
            "other": self.other,
            "vertex": self.vertex,
            "corner": self.corner,
            "other_corner": self.other_corner,
        }


def find_cancellation_pairs(s: SurfaceDiagram) -> list[CancellationPair]:
    corners_at: defaultdict[int, list[Corner]] = defaultdict(list)
    for corner in s.corners():
        corners_at[s.corner_vertex(corner)].append(corner)
    pairs = []
    for f in s.faces:
        for k in range(len(f.boundary)):
            v = s.corner_vertex((f.id, k))
            clockwise = read_word(s, f.id, k)
            for other, j in corners_at[v]:
                if other <= f.id or len(s.face_map[other].boundary) != len(f.boundary):
                    continue
                if anticlockwise_word(s, other, j) == clockwise:
                    pairs.append(CancellationPair(f.id, other, v, k, j))
    return pairs


def _check_pair(s: SurfaceDiagram, pair: CancellationPair) -> None:
    if pair.face not in s.face_map or pair.other not in s.face_map or pair.face >= pair.other:
        raise DiagramError(f"faces {pair.face}, {pair.other} are not a cancellation pair")
    d, other = s.face_map[pair.face], s.face_map[pair.other]
    if not (0 <= pair.corner < len(d.boundary) and 0 <= pair.other_corner < len(other.boundary)):
        raise DiagramError("cancellation corner out of range")
    same_vertex = (
        s.corner_vertex((d.id, pair.corner))
        == s.corner_vertex((other.id, pair.other_corner))
        == pair.vertex
    )
    if not same_vertex or read_word(s, d.id, pair.corner) != anticlockwise_word(
        s, other.id, pair.other_corner
    ):
        raise DiagramError(f"faces {pair.face}, {pair.other} do not cancel at vertex {pair.vertex}")


def apply_cancellation(s: SurfaceDiagram, pair: CancellationPair) -> SurfaceDiagram:
    """Remove the two faces and sew the hole shut along their common word.

    Dart i of the face (counted from the corner) is glued to dart -1 - i of
    the other face. A side whose partner lies on one of the removed faces is
    chased across the hole until it meets a surviving side. When the two faces
    meet only at ``vertex`` the fold splits it in two. Sewing that disconnects
    the diagram or changes its Euler characteristic raises
    ``NonSurfaceResultError`` with ``s`` attached.
    """
    if _unmatched_darts(s):
        raise DiagramError("cancellation needs a closed diagram")
    _check_pair(s, pair)
    d, other = s.face_map[pair.face], s.face_map[pair.other]
    m = len(d.boundary)
    k, j = pair.corner, pair.other_corner

    counterpart: dict[Dart, Dart] = {}
    glued = UnionFind(s.vertices)
    for i in range(m):
        a = d.boundary[(k + i) % m]
        b = other.boundary[(j - 1 - i) % m]
        counterpart[a] = b
        counterpart[b] = a
        glued.union(s.corner_vertex((d.id, (k + i) % m)), s.corner_vertex((other.id, (j - i) % m)))

    survivors = [f for f in s.faces if f.id not in (d.id, other.id)]
    rewired: dict[Dart, Dart] = {}
    settled: set[Dart] = set()
    for f in survivors:
        for x in f.boundary:
            mate = _flip(x)
            if x in settled or mate not in counterpart:
                continue
            visited = {mate}
            w = _flip(counterpart[mate])
            while w in counterpart:
                if w in visited:
                    raise NonSurfaceResultError("sewing closes a loop inside the removed faces", s)
                visited.add(w)
                w = _flip(counterpart[w])
            if w == x:
                raise NonSurfaceResultError(f"sewing folds edge {x[0]} onto itself", s)
            settled.update((x, w))
            rewired[w] = mate

    faces = tuple(
        Face(f.id, tuple(rewired.get(dart, dart) for dart in f.boundary), f.sign, f.basepoint)
        for f in survivors
    )
    result = _rebuild(s, faces, glued)
    if not result.is_empty:
        if not is_connected(result):
            raise NonSurfaceResultError("cancellation disconnects the diagram", s)
        if result.euler_characteristic != s.euler_characteristic:
            raise NonSurfaceResultError(
                f"cancellation changes the Euler characteristic from "
                f"{s.euler_characteristic} to {result.euler_characteristic}",
                s,
            )
    logger.debug(
        "cancelled faces %d and %d at vertex %d: %d faces remain",
        pair.face,
        pair.other,
        pair.vertex,
        len(result.faces),
    )
    return result


def _rebuild(s: SurfaceDiagram, faces: tuple[Face, ...], glued: UnionFind) -> SurfaceDiagram:
    """Vertices and edge endpoints for the sewn faces; ``s`` supplies labels and old vertices.

    Each corner cycle is one vertex. A glued vertex carrying several cycles keeps
    its id on the first and gets fresh ids, above every old one, on the rest.
    """
    if not faces:
        return SurfaceDiagram()
    positions = {dart: (f.id, i) for f in faces for i, dart in enumerate(f.boundary)}
    by_id = {f.id: f for f in faces}

    def old_vertex(corner: Corner) -> int:
        # the dart in this slot was rewired from an old dart ending at the same glued vertex
        face_id, i = corner
        return s.dart_start(s.face_map[face_id].boundary[i])

    def successor(corner: Corner) -> Corner:
        face_id, i = corner
        other, jj = positions[_flip(by_id[face_id].boundary[i])]
        return other, (jj + 1) % len(by_id[other].boundary)

    graph = nx.Graph()
    graph.add_nodes_from(positions.values())
    graph.add_edges_from((c, successor(c)) for c in positions.values())

    vertex_of: dict[Corner, int] = {}
    owned: set[int] = set()
    fresh = max(s.vertices) + 1
    for orbit in sorted(nx.connected_components(graph), key=min):
        olds = {old_vertex(c) for c in orbit}
        roots = {glued[v] for v in olds}
        if len(roots) != 1:
            raise NonSurfaceResultError("sewing merges corners of different vertices", s)
        root = next(iter(roots))
        if root in owned:
            # a second corner cycle on one glued vertex: the fold split it
            new_id, fresh = fresh, fresh + 1
        else:
            owned.add(root)
            new_id = min(olds)
        for c in orbit:
            vertex_of[c] = new_id

    edges = []
    for edge_id in sorted({e for f in faces for e, _ in f.boundary}):
        if (edge_id, 1) in positions:
            face_id, i = positions[(edge_id, 1)]
            source = vertex_of[(face_id, i)]
            target = vertex_of[(face_id, (i + 1) % len(by_id[face_id].boundary))]
        else:
            face_id, i = positions[(edge_id, -1)]
            target = vertex_of[(face_id, i)]
            source = vertex_of[(face_id, (i + 1) % len(by_id[face_id].boundary))]
        edges.append(DEdge(edge_id, s.edge_map[edge_id].label, source, target))
    return SurfaceDiagram(tuple(sorted(set(vertex_of.values()))), tuple(edges), faces)


# --- JSON --------------------------------------------------------------------


def dump_diagram(s: SurfaceDiagram) -> str:
    payload = {
        "vertices": list(s.vertices),
        "edges": [
            {"id": e.id, "label": e.label, "from": e.source, "to": e.target} for e in s.edges
        ],
        "faces": [
            {
                "id": f.id,
                "boundary": [{"edge": e, "dir": d} for e, d in f.boundary],
                "sign": "+" if f.sign == 1 else "-",
                "basepoint": f.basepoint,
            }
            for f in s.faces
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_diagram(text: str) -> SurfaceDiagram:
    try:
        payload = json.loads(text)
        vertices = tuple(int(v) for v in payload["vertices"])
        edges = tuple(
            DEdge(int(e["id"]), str(e["label"]), int(e["from"]), int(e["to"]))
            for e in payload["edges"]
        )
        faces = tuple(
            Face(
                int(f["id"]),
                tuple((int(r["edge"]), int(r["dir"])) for r in f["boundary"]),
                {"+": 1, "-": -1}[f["sign"]],
                int(f.get("basepoint", 0)),
            )
            for f in payload["faces"]
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DiagramError):
            raise
        raise DiagramError(f"cannot read diagram JSON: {scrub(exc)}") from exc
    return SurfaceDiagram(vertices, edges, faces)


def load_angles(text: str) -> dict[Corner, Fraction]:
    """Read ``[{"face": f, "corner": k, "angle": "p/q"}, ...]``."""
    try:
        entries = json.loads(text)
        angles: dict[Corner, Fraction] = {}
        for entry in entries:
            value = entry["angle"]
            if isinstance(value, float):
                raise AngleError("angles must be exact: give 'p/q' strings or integers")
            corner = (int(entry["face"]), int(entry["corner"]))
            if corner in angles:
                raise AngleError(f"corner {corner} has two angles")
            angles[corner] = Fraction(value)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, AngleError):
            raise
        raise AngleError(f"cannot read angles JSON: {scrub(exc)}") from exc
    return angles


def diagram_presentation(s: SurfaceDiagram) -> Presentation:
    """Generators from the edge labels, one relator per face (its word, sign undone)."""
    gens = tuple(sorted({e.label for e in s.edges}))
    rels = []
    for f in s.faces:
        word = read_word(s, f.id)
        rels.append(word if f.sign == 1 else word.inverse())
    return Presentation(gens, tuple(rels))
