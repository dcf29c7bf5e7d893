"""Forbidden edge combinations, the vertex link and its girth, and the verdict."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logkit.config import FAMILY_APPLICABLE_FROM
from logkit.log_model import (
    Edge,
    LabeledOrientedGraph,
    cyclic_shift_family,
    random_tree,
    relabel,
)
from logkit.npc import (
    NotCompressedError,
    NotCyclicallyReducedError,
    PatternReport,
    build_link_graph,
    check,
    find_forbidden_patterns,
    girth,
    verdict,
)
from logkit.presentation import Presentation, Word, log_presentation

# --- Patterns ----------------------------------------------------------------


def test_trefoil_has_a_two_cycle(trefoil):
    e1, e2 = trefoil.edges
    patterns = find_forbidden_patterns(trefoil)
    assert patterns.fig1 == ((e1, e2),)
    assert patterns.fig2 == ()
    assert set(patterns.fig3) == {(e1, e2), (e2, e1)}


def test_fig3_is_ordered():
    g = LabeledOrientedGraph.from_edges([Edge("x", "w", "y"), Edge("y", "x", "z")])
    e1, e2 = g.edges
    assert find_forbidden_patterns(g).fig3 == ((e2, e1),)


def test_family_seven_has_a_three_cycle():
    g = cyclic_shift_family(7)
    e = g.edges
    assert (e[0], e[2], e[4]) in find_forbidden_patterns(g).fig2


def test_family_eleven_is_clean(family11):
    patterns = find_forbidden_patterns(family11)
    assert patterns.fig1 == patterns.fig2 == patterns.fig3 == ()


def test_patterns_need_a_compressed_graph():
    g = LabeledOrientedGraph.from_edges([Edge("a", "a", "b")])
    with pytest.raises(NotCompressedError):
        find_forbidden_patterns(g)


def test_pattern_report_as_dict(trefoil):
    d = find_forbidden_patterns(trefoil).as_dict()
    assert d["fig1"] == [["a|b|c", "b|c|a"]]


# --- Vertex link -------------------------------------------------------------


def test_link_has_two_nodes_per_generator_and_one_arc_per_corner(trefoil_p):
    link = build_link_graph(trefoil_p)
    assert len(link.nodes) == 6
    assert len(link.arcs) == 8
    assert {a.relator for a in link.arcs} == {0, 1}


def test_single_edge_link_is_a_forest():
    p = log_presentation(LabeledOrientedGraph.from_edges([Edge("a", "b", "c")]))
    assert girth(build_link_graph(p)) == math.inf


def test_parallel_arcs_give_girth_two():
    p = Presentation(("x",), (Word.power("x", 2),))
    assert girth(build_link_graph(p)) == 2


def test_free_group_link_has_no_cycle():
    assert girth(build_link_graph(Presentation(("x", "y")))) == math.inf


def test_link_needs_cyclically_reduced_relators():
    p = Presentation(("x", "y"), (Word.parse("x y y^-1"),))
    with pytest.raises(NotCyclicallyReducedError):
        build_link_graph(p)


# --- Verdict -----------------------------------------------------------------


def test_trefoil_verdict(trefoil):
    v = verdict(trefoil)
    assert not v.npc and not v.theorem2_applicable
    assert {r.clause for r in v.reasons} == {"fig1", "fig3"}


def test_family_eleven_is_applicable(family11):
    v = verdict(family11)
    assert v.npc and v.theorem2_applicable
    assert v.reasons == ()


def test_isolated_vertex_keeps_npc_but_breaks_the_tree(family11):
    g = LabeledOrientedGraph(("extra", *family11.vertices), family11.edges)
    v = verdict(g)
    assert v.npc
    assert not v.theorem2_applicable
    assert [r.clause for r in v.reasons] == ["tree"]


def test_uncompressed_graph_is_not_npc():
    v = verdict(LabeledOrientedGraph.from_edges([Edge("a", "a", "b"), Edge("b", "c", "a")]))
    assert not v.npc
    assert v.reasons[0].clause == "compressed"


def test_repeated_label_is_not_npc():
    g = LabeledOrientedGraph.from_edges([Edge("a", "c", "b"), Edge("b", "c", "d")])
    v = verdict(g)
    assert not v.npc
    assert any(r.clause == "injective" and r.witness == "c" for r in v.reasons)


# --- Check and the girth oracle ---------------------------------------------


def test_check_agrees_with_girth(trefoil, family11):
    for g in (trefoil, family11):
        report = check(g)
        assert report.oracle_agrees is True
    assert check(trefoil).link_girth < 4
    assert check(family11).link_girth >= 4


def test_check_as_dict_writes_infinite_girth_as_text():
    report = check(LabeledOrientedGraph.from_edges([Edge("a", "b", "c")]))
    d = report.as_dict()
    assert d["link_girth"] == "inf"
    assert d["oracle_agrees"] is True


def test_oracle_is_silent_without_injectivity():
    g = LabeledOrientedGraph.from_edges([Edge("a", "c", "b"), Edge("b", "c", "d")])
    assert check(g).oracle_agrees is None


@pytest.mark.parametrize("n", range(4, 14))
def test_family_oracle_agreement(n):
    assert check(cyclic_shift_family(n)).oracle_agrees in (True, None)


@settings(max_examples=40, deadline=None)
@given(st.permutations([str(i) for i in range(11)]))
def test_verdict_is_invariant_under_renaming(perm):
    g = cyclic_shift_family(11)
    renamed = relabel(g, dict(zip(g.vertices, perm)))
    assert verdict(renamed).npc == verdict(g).npc
    assert verdict(renamed).theorem2_applicable == verdict(g).theorem2_applicable


@pytest.mark.parametrize("n", range(FAMILY_APPLICABLE_FROM, 31))
def test_family_is_applicable_from_ten_on(n):
    report = check(cyclic_shift_family(n))
    assert report.verdict.theorem2_applicable
    assert report.oracle_agrees is True


def test_family_below_ten_is_blocked():
    v = verdict(cyclic_shift_family(FAMILY_APPLICABLE_FROM - 1))
    assert not v.theorem2_applicable


# --- Pattern invariants ------------------------------------------------------


def _rename_edge(e: Edge, names: dict[str, str]) -> Edge:
    return Edge(names[e.source], names[e.label], names[e.target])


def _renamed(report: PatternReport, names: dict[str, str]) -> PatternReport:
    def ren(hits):
        return tuple(tuple(_rename_edge(e, names) for e in hit) for hit in hits)

    return PatternReport(ren(report.fig1), ren(report.fig2), ren(report.fig3))


def _cycles(triples) -> set[frozenset]:
    return {frozenset((t, t[1:] + t[:1], t[2:] + t[:2])) for t in triples}


def _pattern_sets(report: PatternReport) -> tuple[set, set, set]:
    return {frozenset(p) for p in report.fig1}, _cycles(report.fig2), set(report.fig3)


def _compressed_tree(seed: int, size: int) -> LabeledOrientedGraph:
    return random_tree(size, np.random.default_rng(seed), compressed=True)


_trees = st.builds(_compressed_tree, st.integers(0, 2**32 - 1), st.integers(3, 9))


@settings(max_examples=60, deadline=None)
@given(_trees, st.randoms(use_true_random=False))
def test_patterns_follow_a_renaming(g, random):
    fresh = [f"v{i}" for i in range(len(g.vertices))]
    random.shuffle(fresh)
    names = dict(zip(g.vertices, fresh))
    assert find_forbidden_patterns(relabel(g, names)) == _renamed(
        find_forbidden_patterns(g), names
    )


@settings(max_examples=60, deadline=None)
@given(_trees)
def test_two_cycles_are_symmetric(g):
    for e, f in find_forbidden_patterns(g).fig1:
        assert e.label in f.endpoints and f.label in e.endpoints
    flipped = LabeledOrientedGraph(g.vertices, g.edges[::-1])
    assert _pattern_sets(find_forbidden_patterns(flipped)) == _pattern_sets(
        find_forbidden_patterns(g)
    )


@settings(max_examples=60, deadline=None)
@given(_trees, st.integers(0, 8))
def test_three_cycles_do_not_depend_on_the_edge_order(g, shift):
    for e1, e2, e3 in find_forbidden_patterns(g).fig2:
        assert e1.label in e2.endpoints
        assert e2.label in e3.endpoints
        assert e3.label in e1.endpoints
    k = shift % len(g.edges)
    rotated = LabeledOrientedGraph(g.vertices, g.edges[k:] + g.edges[:k])
    before = _cycles(find_forbidden_patterns(g).fig2)
    assert _cycles(find_forbidden_patterns(rotated).fig2) == before


@pytest.mark.parametrize("n", range(4, 10))
def test_family_three_cycles_do_not_depend_on_the_edge_order(n):
    g = cyclic_shift_family(n)
    rotated = LabeledOrientedGraph(g.vertices, g.edges[2:] + g.edges[:2])
    assert _pattern_sets(find_forbidden_patterns(rotated)) == _pattern_sets(
        find_forbidden_patterns(g)
    )


@settings(max_examples=60, deadline=None)
@given(_trees, st.randoms(use_true_random=False))
def test_adding_an_edge_never_removes_a_pattern(g, random):
    source, target, label = random.sample([*g.vertices, "new"], 3)
    extra = Edge(source, label, target)
    if extra in g.edges:
        return
    bigger = LabeledOrientedGraph.from_edges([*g.edges, extra], g.vertices)
    before = _pattern_sets(find_forbidden_patterns(g))
    after = _pattern_sets(find_forbidden_patterns(bigger))
    for old, new in zip(before, after):
        assert old <= new
