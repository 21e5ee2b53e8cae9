"""Brute-force ground truth by enumerating parent choices.

Each non-root vertex picks one in-arc (ascending vertex order, ascending
tail); a partial choice is abandoned only when it closes a cycle.  No bound
on the objective is used anywhere, on purpose.
"""

from __future__ import annotations

from .digraph import DiGraph
from .state import FL, IN, LN, SearchState

DEFAULT_CAP = 12


class CapExceeded(ValueError):
    pass


def _enumerate(vertices, root, candidates, visit):
    """Call ``visit(parent)`` for every spanning out-branching given as a parent map."""
    order = [v for v in vertices if v != root]
    parent = {}

    def closes_cycle(v, p):
        while p != root:
            if p == v:
                return True
            p = parent.get(p)
            if p is None:
                return False
        return False

    def rec(i):
        if i == len(order):
            visit(parent)
            return
        v = order[i]
        for p in candidates[v]:
            if closes_cycle(v, p):
                continue
            parent[v] = p
            rec(i + 1)
            del parent[v]

    if all(candidates[v] for v in order):
        rec(0)


def _best(vertices, root, candidates, must_be_internal=()):
    best = [None]
    need = set(must_be_internal)

    def visit(parent):
        tails = set(parent.values())
        if need and not need <= tails:
            return
        leaves = sum(1 for v in parent if v not in tails)
        if best[0] is None or leaves > best[0]:
            best[0] = leaves

    _enumerate(vertices, root, candidates, visit)
    return (False, 0) if best[0] is None else (True, best[0])


def _check_cap(n, cap):
    if n > cap:
        raise CapExceeded(f"{n} vertices exceeds the oracle cap of {cap}")


def solve_unconstrained(g: DiGraph, r: int, cap: int = DEFAULT_CAP) -> tuple[bool, int]:
    """(feasible, maximum leaves) over out-branchings of ``g`` rooted at ``r``."""
    _check_cap(len(g), cap)
    if len(g) == 1:
        return True, 0
    cands = {v: sorted(g.pred[v]) for v in g.vertices}
    return _best(g.vertices, r, cands)


def solve_constrained(s: SearchState, cap: int = DEFAULT_CAP) -> tuple[bool, int]:
    """Optimum over out-branchings extending the state's tree that respect its labels.

    Tree parents are forced, IN vertices must get a child, LN/FL vertices must
    stay childless; only arcs of the state's current graph are used.
    """
    g = s.graph
    _check_cap(len(g), cap)
    if len(g) == 1:
        return True, 0
    labels = s.labels
    leafy = {v for v, lab in labels.items() if lab in (LN, FL)}
    cands = {}
    for v in g.vertices:
        if v in s.parent:
            cands[v] = [s.parent[v]]
        else:
            cands[v] = [u for u in sorted(g.pred[v]) if u not in leafy]
    inner = [v for v, lab in labels.items() if lab is IN]
    return _best(g.vertices, s.root, cands, inner)


def count_out_branchings(g: DiGraph, r: int, cap: int = DEFAULT_CAP) -> int:
    _check_cap(len(g), cap)
    n = [0]

    def visit(parent):
        n[0] += 1

    _enumerate(g.vertices, r, {v: sorted(g.pred[v]) for v in g.vertices}, visit)
    return n[0]


def solve_all_roots(g: DiGraph, cap: int = DEFAULT_CAP) -> tuple[bool, int]:
    best = None
    for r in g.vertices:
        ok, k = solve_unconstrained(g, r, cap)
        if ok and (best is None or k > best):
            best = k
    return (False, 0) if best is None else (True, best)
