from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mincut_qaoa.graph import (Arc, Graph, GraphError, dump_graph, enumerate_paths, has_st_path,
                               load_graph, max_flow_min_cut, min_cut_by_subsets, random_graph,
                               remove_arcs)

from conftest import random_connected_graph

seeds = st.integers(0, 2**32 - 1)


def test_load_minimal():
    g = load_graph("v 2\na 1 1 2 7.0\ns 1\nt 2\n")
    assert len(g.arcs) == 1
    assert g.weight(1) == 7
    assert (g.source, g.sink) == (1, 2)


@pytest.mark.parametrize("text, fragment, line", [
    ("v 2\na 1 1 2 0\ns 1\nt 2", "nonpositive weight", 2),
    ("v 2\na 1 1 2 -1.5\ns 1\nt 2", "nonpositive weight", 2),
    ("v 3\na 1 1 2 1\na 1 2 3 1\ns 1\nt 3", "duplicate label", 3),
    ("v 2\na 1 1 2 x\ns 1\nt 2", "cannot parse", 2),
    ("v 2\na 1 1 1 1\ns 1\nt 2", "self-loop", 2),
    ("v 2\na 1 1 2 1\ns 1\nt 9", "out of range", 4),
    ("v 2\nq 1\ns 1\nt 2", "cannot parse", 2),
])
def test_load_errors_report_line(text, fragment, line):
    with pytest.raises(GraphError, match=fragment) as info:
        load_graph(text)
    assert info.value.line == line


@pytest.mark.parametrize("text, fragment", [
    ("v 2\na 1 1 2 1\nt 2", "missing source"),
    ("v 2\na 1 1 2 1\ns 1", "missing sink"),
    ("v 3\na 1 1 2 1\na 3 2 3 1\ns 1\nt 3", "contiguous"),
])
def test_load_missing_records(text, fragment):
    with pytest.raises(GraphError, match=fragment):
        load_graph(text)


def test_g7_shape(g7):
    assert len(g7.vertices) == 7
    assert len(g7.arcs) == 10
    assert (g7.source, g7.sink) == (4, 2)
    assert g7.weight(1) == 3 and g7.weight(3) == 2


def test_dump_roundtrip(g7):
    assert load_graph(dump_graph(g7)) == g7
    g = load_graph("v 2\na 1 1 2 0.125\na 2 1 2 1/3\ns 1\nt 2")
    assert load_graph(dump_graph(g)) == g


def test_g7_paths(g7):
    ps = enumerate_paths(g7)
    assert ps.complete
    assert [p.vertices for p in ps] == [(4, 1, 2), (4, 5, 3, 1, 2), (4, 5, 3, 2),
                                       (4, 5, 6, 7, 2), (4, 5, 7, 2)]
    assert ps.lengths == [2, 4, 3, 4, 3]


def test_paths_trivial_cases():
    ps = enumerate_paths(load_graph("v 2\na 1 1 2 1\ns 1\nt 2"))
    assert [p.arc_labels for p in ps] == [(1,)]
    ps = enumerate_paths(load_graph("v 3\na 1 2 1 1\ns 1\nt 3"))
    assert len(ps) == 0 and ps.complete


def test_paths_truncation(g7):
    ps = enumerate_paths(g7, limit=3)
    assert len(ps) == 3 and not ps.complete
    assert enumerate_paths(g7, limit=5).complete


def test_max_flow_examples(g7):
    assert max_flow_min_cut(load_graph("v 2\na 1 1 2 7.0\ns 1\nt 2")) == (7, {1})
    parallel = Graph(frozenset({1, 2}), (Arc(1, 1, 2, Fraction(2)), Arc(2, 1, 2, Fraction(3))), 1, 2)
    assert max_flow_min_cut(parallel) == (5, {1, 2})
    assert max_flow_min_cut(load_graph("v 3\na 1 1 2 4\ns 1\nt 3")) == (0, frozenset())
    assert max_flow_min_cut(g7)[0] == min_cut_by_subsets(g7)[0] == 5


def test_max_flow_rational_weights():
    g = load_graph("v 3\na 1 1 2 0.1\na 2 1 2 0.2\na 3 2 3 1/3\ns 1\nt 3")
    value, cut = max_flow_min_cut(g)
    assert value == Fraction(3, 10)
    assert g.total_weight(cut) == value


def test_remove_arcs(g7):
    assert remove_arcs(g7, set()) == g7
    cut = remove_arcs(g7, {1, 3})
    assert g7.out_arcs(4) and cut.out_arcs(4) == []
    assert not has_st_path(cut)
    assert cut.labels == (2, 4, 5, 6, 7, 8, 9, 10)
    with pytest.raises(GraphError, match="unknown"):
        remove_arcs(g7, {11})


def test_has_st_path(g7):
    assert has_st_path(g7)
    assert not has_st_path(remove_arcs(g7, {1, 3}))
    assert not has_st_path(remove_arcs(g7, set(g7.labels)))


def test_g10_walkthrough(g10):
    # removing both source arcs (4,1) and (4,2) leaves routes through (4,3)
    assert [(g10.arc(k).tail, g10.arc(k).head) for k in (1, 2)] == [(4, 1), (4, 2)]
    residual = remove_arcs(g10, {1, 2})
    assert has_st_path(residual)
    remaining = enumerate_paths(residual)
    assert len(remaining) >= 3
    assert all(p.arc_labels[0] == 3 for p in remaining)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_duality_against_subset_oracle(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(2, 9)), int(rng.integers(1, 15)))
    value, cut = max_flow_min_cut(g)
    assert value == min_cut_by_subsets(g)[0]
    assert g.total_weight(cut) == value
    assert not has_st_path(remove_arcs(g, cut))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_complete_enumeration_hitting_sets_are_cuts(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, max_vertices=6, max_arcs=10)
    ps = enumerate_paths(g)
    assert len({p.arc_labels for p in ps}) == len(ps)
    for p in ps:
        assert len(set(p.vertices)) == len(p.vertices)
        assert p.vertices[0] == g.source and p.vertices[-1] == g.sink
    for _ in range(20):
        subset = {k for k in g.labels if rng.random() < 0.4}
        hits_all = all(subset.intersection(p.arc_labels) for p in ps)
        if hits_all:
            assert not has_st_path(remove_arcs(g, subset))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_removed_labels_never_reappear(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, max_vertices=6, max_arcs=10)
    removed = {k for k in g.labels if rng.random() < 0.3}
    for p in enumerate_paths(remove_arcs(g, removed)):
        assert not removed.intersection(p.arc_labels)
