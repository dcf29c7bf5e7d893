"""Shared fixtures: the trefoil interval, the cyclic-shift family, and random diagrams."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from logkit.diagrams import (
    SurfaceDiagram,
    canonical_edge_sphere,
    canonical_power_sphere,
    face_disc,
    mirror_double,
    remove_faces,
    torus_grid,
)
from logkit.log_model import Edge, LabeledOrientedGraph, cyclic_shift_family
from logkit.presentation import Presentation, Word, log_presentation

GENERATORS = ("a", "b", "c")


@pytest.fixture
def trefoil() -> LabeledOrientedGraph:
    """The two-edge interval c - a - b whose group is the trefoil group."""
    return LabeledOrientedGraph.from_edges([Edge("a", "b", "c"), Edge("b", "c", "a")])


@pytest.fixture
def trefoil_p(trefoil) -> Presentation:
    return log_presentation(trefoil)


@pytest.fixture
def family11() -> LabeledOrientedGraph:
    return cyclic_shift_family(11)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def log_file(tmp_path):
    """Write LOG text to a file and return its path as a string."""

    def _write(text: str, name: str = "input.log") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def _random_word(rng: np.random.Generator) -> Word:
    length = int(rng.integers(1, 7))
    return Word(
        tuple(
            (GENERATORS[int(rng.integers(len(GENERATORS)))], 1 if rng.random() < 0.5 else -1)
            for _ in range(length)
        )
    )


def random_closed_diagram(rng: np.random.Generator) -> SurfaceDiagram:
    kind = int(rng.integers(5))
    if kind == 0:
        return canonical_power_sphere("g", int(rng.integers(2, 9)))
    if kind == 1:
        return canonical_edge_sphere(Edge("a", "b", "c"), int(rng.integers(2, 9)))
    if kind == 2:
        return torus_grid(int(rng.integers(2, 5)), int(rng.integers(2, 5)))
    if kind == 3:
        return mirror_double(face_disc(_random_word(rng)))
    n = int(rng.integers(2, 7))
    sphere = canonical_edge_sphere(Edge("a", "b", "c"), n)
    return mirror_double(remove_faces(sphere, [n + 1]))


def random_angles(s: SurfaceDiagram, rng: np.random.Generator) -> dict[tuple[int, int], Fraction]:
    return {
        corner: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 7)))
        for corner in s.corners()
    }


@pytest.fixture
def diagram_factory():
    return random_closed_diagram


@pytest.fixture
def angle_factory():
    return random_angles
