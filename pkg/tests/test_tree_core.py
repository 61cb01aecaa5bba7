import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permtrees.gw import enumerate_trees
from permtrees.tree_core import (
    OrderedTree,
    attach,
    count_at_height,
    degree,
    fringe,
    leaves,
    lex_compare,
    local_distance,
    metric_index,
    truncate,
    validate_tree,
    vertex_order,
)
from strategies import trees

CHERRY = OrderedTree.from_vertices([(), (1,), (2,)])
PATH3 = OrderedTree.from_vertices([(), (1,), (1, 1)])
SINGLE = OrderedTree.from_vertices([()])


def test_lex_compare():
    assert lex_compare((), (1,)) == -1
    assert lex_compare((1, 2), (2,)) == -1
    assert lex_compare((1,), (1, 1)) == -1
    assert lex_compare((2,), (1, 5)) == 1
    assert lex_compare((1, 3), (1, 3)) == 0


def test_validate_tree():
    assert validate_tree([()])
    assert not validate_tree([(), (2,)])
    assert not validate_tree([(1,)])
    assert not validate_tree([(), (1,), (1, 1), (2, 1)])
    assert not validate_tree([(), (0,)])
    with pytest.raises(ValueError):
        OrderedTree.from_vertices([(), (2,)])


def test_bad_degree_sequence():
    with pytest.raises(ValueError):
        OrderedTree([2, 0])
    with pytest.raises(ValueError):
        OrderedTree([0, 0])


def test_degree():
    assert degree(CHERRY, ()) == 2
    assert degree(CHERRY, (1,)) == 0
    assert degree(CHERRY, (3,)) == -1


def test_fringe():
    assert fringe(PATH3, (1,)) == OrderedTree.from_vertices([(), (1,)])
    assert fringe(CHERRY, ()) == CHERRY
    assert fringe(CHERRY, (2,)) == SINGLE
    with pytest.raises(ValueError, match="vertex not in tree"):
        fringe(CHERRY, (1, 1))


def test_truncate():
    assert truncate(PATH3, 1) == OrderedTree.from_vertices([(), (1,)])
    assert truncate(CHERRY, 0) == SINGLE
    assert truncate(PATH3, 5) == PATH3


def test_count_at_height():
    assert count_at_height(CHERRY, 1) == 2
    assert count_at_height(PATH3, 0) == 1
    assert count_at_height(PATH3, 2) == 1


def test_vertex_order_and_leaves():
    assert vertex_order(CHERRY) == [(), (1,), (2,)]
    t = OrderedTree.from_vertices([(2,), (), (1, 1), (1,)])
    assert vertex_order(t) == [(), (1,), (1, 1), (2,)]
    assert vertex_order(SINGLE) == [()]
    assert leaves(CHERRY) == [(1,), (2,)]
    assert leaves(SINGLE) == [()]
    assert leaves(PATH3) == [(1, 1)]


def test_attach():
    assert attach(SINGLE, (), [SINGLE]) == OrderedTree.from_vertices([(), (1,)])
    edge = OrderedTree.from_vertices([(), (1,)])
    assert attach(edge, (1,), [SINGLE, SINGLE]) == OrderedTree.from_vertices([(), (1,), (1, 1), (1, 2)])
    assert attach(edge, (1,), [edge]) == OrderedTree.from_vertices([(), (1,), (1, 1), (1, 1, 1)])
    with pytest.raises(ValueError):
        attach(edge, (), [SINGLE])


def test_json_children_form():
    assert SINGLE.to_children() == []
    assert CHERRY.to_children() == [[], []]
    assert PATH3.to_children() == [[[]]]
    assert OrderedTree.from_children(json.loads("[[[]], []]")) == OrderedTree.from_vertices([(), (1,), (1, 1), (2,)])


def test_local_distance_examples():
    assert local_distance(CHERRY, CHERRY) == 0
    # root degree differs (index 1) and (1,) is a leaf in one tree only (index 2)
    assert local_distance(SINGLE, OrderedTree.from_vertices([(), (1,)])) == Fraction(3, 4)
    assert metric_index(()) == 1
    assert metric_index((1,)) == 2
    assert metric_index((9,)) is None


def test_local_distance_separates_small_trees():
    small = [t for size in range(1, 7) for t in enumerate_trees(size)]
    for t, s in itertools.combinations_with_replacement(small, 2):
        d = local_distance(t, s)
        assert (d == 0) == (t == s)
        assert d == local_distance(s, t)


@given(trees())
def test_representations_agree(t):
    labels = t.vertices()
    assert validate_tree(labels)
    assert OrderedTree.from_vertices(reversed(labels)) == t
    assert OrderedTree.from_depths(t.depths) == t
    assert OrderedTree.from_dyck(t.to_dyck()) == t
    assert OrderedTree.from_children(t.to_children()) == t
    assert all(lex_compare(a, b) == -1 for a, b in zip(labels, labels[1:]))
    assert [len(u) for u in labels] == t.depths.tolist()
    for i, u in enumerate(labels):
        assert t.sizes[i] == sum(1 for v in labels if v[: len(u)] == u)
        assert degree(t, u) == sum(1 for v in labels if len(v) == len(u) + 1 and v[:-1] == u)


@given(trees(), st.integers(0, 6), st.integers(0, 6))
def test_truncate_composes(t, m, m2):
    assert truncate(truncate(t, m), m2) == truncate(t, min(m, m2))
    assert set(truncate(t, m).vertices()) == {u for u in t.vertices() if len(u) <= m}


@given(trees())
def test_heights_partition(t):
    assert sum(count_at_height(t, k) for k in range(t.height + 1)) == len(t)


@given(trees(), st.data())
def test_fringe_is_valid(t, data):
    u = data.draw(st.sampled_from(t.vertices()))
    f = fringe(t, u)
    assert validate_tree(f.vertices())
    assert {u + v for v in f.vertices()} == {v for v in t.vertices() if v[: len(u)] == u}


@given(trees(max_size=8), st.data())
def test_attach_round_trip(t, data):
    leaf = data.draw(st.sampled_from(leaves(t)))
    subs = data.draw(st.lists(trees(max_size=4), min_size=1, max_size=3))
    big = attach(t, leaf, subs)
    assert degree(big, leaf) == len(subs)
    for i, s in enumerate(subs, start=1):
        assert fringe(big, leaf + (i,)) == s
    kept = [u for u in big.vertices() if not (len(u) > len(leaf) and u[: len(leaf)] == leaf)]
    assert OrderedTree.from_vertices(kept) == t


def test_degrees_are_read_only():
    with pytest.raises(ValueError):
        CHERRY.degrees[0] = 5
    assert isinstance(CHERRY.degrees, np.ndarray)
