import pytest

from _instances import bidirected_complete, cycle, labelled
from dmlst.digraph import DiGraph
from dmlst.reduce import reduce_fixpoint
from dmlst.state import (BN, FL, FREE, IN, LN, TRANSITIONS, Degenerate, IllegalTransition,
                         InfeasibleRoot, initial_state, is_spanning, leaf_count, set_internal,
                         set_leaf)


def test_transition_table():
    assert TRANSITIONS[FREE] == {IN, LN, BN, FL}
    assert TRANSITIONS[BN] == {IN, LN}
    assert TRANSITIONS[FL] == {LN}
    assert not TRANSITIONS[IN] and not TRANSITIONS[LN]


def test_initial_state_star():
    s = initial_state(DiGraph(4, [(0, 1), (0, 2), (0, 3)]), 0)
    assert s.tree == {(0, 1), (0, 2), (0, 3)}
    assert [s.labels[v] for v in (0, 1, 2, 3)] == [IN, BN, BN, BN]


def test_initial_state_path():
    s = initial_state(DiGraph(3, [(0, 1), (1, 2)]), 0)
    assert s.tree == {(0, 1)}
    assert (s.labels[1], s.labels[2]) == (BN, FREE)


def test_initial_state_cycle():
    s = initial_state(cycle(3), 0)
    assert s.tree == {(0, 1)}
    assert (s.labels[1], s.labels[2]) == (BN, FREE)


def test_initial_state_errors():
    with pytest.raises(Degenerate):
        initial_state(DiGraph(1), 0)
    with pytest.raises(InfeasibleRoot):
        initial_state(DiGraph(3, [(0, 1)]), 0)


def test_set_internal_attaches_free_and_floating():
    g = DiGraph(4, [(0, 1), (1, 2), (1, 3), (0, 3)])
    s = labelled(g, 0, {0: IN, 1: BN, 2: FREE, 3: FL}, {1: 0})
    t = set_internal(s, 1)
    assert (t.labels[1], t.labels[2], t.labels[3]) == (IN, BN, LN)
    assert {(1, 2), (1, 3)} <= t.tree
    # the input is untouched
    assert (s.labels[1], s.labels[2], s.labels[3]) == (BN, FREE, FL)
    assert s.tree == {(0, 1)}


def test_set_internal_out_degree_zero():
    s = labelled(DiGraph(2, [(0, 1)]), 0, {0: IN, 1: BN}, {1: 0})
    t = set_internal(s, 1)
    assert t.labels[1] is IN and t.tree == {(0, 1)}


def test_set_internal_is_inner_maximal():
    g = bidirected_complete(4)
    s = initial_state(g, 0)
    t = set_internal(s, 1)
    for v, lab in t.labels.items():
        if lab is IN:
            assert all(w in t.tree_vertices() for w in t.graph.succ[v])


def test_set_leaf():
    s = labelled(DiGraph(3, [(0, 1), (0, 2), (1, 2)]), 0, {0: IN, 1: BN, 2: FREE}, {1: 0})
    assert set_leaf(s, 1).labels[1] is LN
    with pytest.raises(IllegalTransition):
        set_leaf(s, 0)
    with pytest.raises(IllegalTransition):
        set_leaf(s, 2)


def test_tree_shape_invariant():
    s = initial_state(bidirected_complete(5), 2)
    t = set_internal(set_internal(s, 0), 1)
    assert len(t.tree) == len(t.tree_vertices()) - 1
    heads = [c for _, c in t.tree]
    assert len(heads) == len(set(heads)) and t.root not in heads


def test_spanning_and_leaf_count():
    star = initial_state(DiGraph(4, [(0, 1), (0, 2), (0, 3)]), 0)
    red = reduce_fixpoint(star)
    assert is_spanning(red.state) and leaf_count(red.state) == 3
    assert not is_spanning(initial_state(DiGraph(3, [(0, 1), (1, 2)]), 0))
    for r in range(4):
        red = reduce_fixpoint(initial_state(bidirected_complete(4), r))
        assert red.halt.kind == "solved" and red.halt.leaves == 3
