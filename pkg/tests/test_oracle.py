import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _instances import bidirected_complete, cycle, labelled
from dmlst.cli import generate_random
from dmlst.digraph import DiGraph
from dmlst.oracle import (CapExceeded, count_out_branchings, solve_all_roots, solve_constrained,
                          solve_unconstrained)
from dmlst.state import FL, FREE, IN, LN, initial_state

# B8 shape (pivot v with out-neighbours x1 -> x2, extra parent q of x1)
# on six vertices: r=0, v=1, x1=2, x2=3, q=4, a=5
B8_HOST = DiGraph(6, [(0, 1), (1, 2), (1, 3), (4, 2), (2, 3), (2, 5), (3, 5), (5, 4), (0, 4)])
B8_HOST_LEAVES = 3  # pinned from the first run of this oracle


def matrix_tree_count(g: DiGraph, r: int) -> int:
    """Out-branchings rooted at r via the directed matrix-tree theorem."""
    n = len(g)
    lap = np.zeros((n, n))
    for u, v in g.arcs():
        lap[v, v] += 1
        lap[u, v] -= 1
    keep = [i for i in range(n) if i != r]
    return round(np.linalg.det(lap[np.ix_(keep, keep)]))


@pytest.mark.parametrize("r", range(4))
def test_c4(r):
    assert solve_unconstrained(cycle(4), r) == (True, 1)


def test_bidirected_star():
    g = DiGraph(5, [a for v in range(1, 5) for a in ((0, v), (v, 0))])
    assert solve_unconstrained(g, 0) == (True, 4)
    assert solve_unconstrained(g, 1) == (True, 3)


def test_infeasible_root():
    assert solve_unconstrained(DiGraph(3, [(0, 1)]), 0) == (False, 0)
    assert solve_all_roots(DiGraph(3, [(1, 0), (2, 0)])) == (False, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_counts_on_complete_graphs(n):
    g = bidirected_complete(n)
    assert count_out_branchings(g, 0) == n ** (n - 2) == matrix_tree_count(g, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.sampled_from((0.3, 0.5, 0.7)), st.integers(0, 10 ** 6))
def test_counts_match_matrix_tree(n, p, seed):
    g = generate_random(n, p, seed)
    assert count_out_branchings(g, 0) == matrix_tree_count(g, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 7), st.sampled_from((0.3, 0.5)), st.integers(0, 10 ** 6))
def test_unconstrained_equals_constrained_initial(n, p, seed):
    g = generate_random(n, p, seed)
    for r in g.vertices:
        if len(g.reachable_from(r)) == n:
            assert solve_unconstrained(g, r) == solve_constrained(initial_state(g, r))


def test_constrained_terminal_state():
    g = DiGraph(3, [(0, 1), (0, 2)])
    s = labelled(g, 0, {0: IN, 1: LN, 2: LN}, {1: 0, 2: 0})
    assert solve_constrained(s) == (True, 2)


def test_constrained_orphaned_floating_leaf():
    g = DiGraph(3, [(0, 1), (2, 1)])
    s = labelled(g, 0, {0: IN, 1: LN, 2: FL}, {1: 0})
    assert solve_constrained(s) == (False, 0)


def test_constrained_in_vertex_needs_a_child():
    g = DiGraph(3, [(0, 1), (0, 2), (1, 2)])
    s = labelled(g, 0, {0: IN, 1: IN, 2: FREE}, {1: 0})
    assert solve_constrained(s) == (True, 1)
    # once 2 hangs off the root, 1 can never get a child
    s = labelled(g, 0, {0: IN, 1: IN, 2: LN}, {1: 0, 2: 0})
    assert solve_constrained(s) == (False, 0)


def test_cap():
    with pytest.raises(CapExceeded):
        solve_unconstrained(cycle(13), 0)
    assert solve_unconstrained(cycle(13), 0, cap=13) == (True, 1)


def test_b8_shape_host_regression():
    best = max(solve_unconstrained(B8_HOST, r)[1] for r in B8_HOST.vertices)
    assert solve_unconstrained(B8_HOST, 0) == (True, B8_HOST_LEAVES)
    assert best == B8_HOST_LEAVES
