"""Labelled search states for the rooted problem.

A state couples the (shrinking) digraph with a vertex labelling, the partial
out-tree grown from the root and the log of arc contractions performed so
far.  Public transition functions return new states; the underscore-prefixed
methods mutate in place and are reserved for the reduction and branching code,
which always work on a private copy.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from .digraph import Arc, ContractionRecord, DiGraph


class Label(enum.Enum):
    FREE = "free"
    IN = "IN"
    LN = "LN"
    BN = "BN"
    FL = "FL"

    def __repr__(self) -> str:
        return self.value


FREE, IN, LN, BN, FL = Label.FREE, Label.IN, Label.LN, Label.BN, Label.FL

TRANSITIONS = {
    FREE: frozenset({IN, LN, BN, FL}),
    BN: frozenset({IN, LN}),
    FL: frozenset({LN}),
    IN: frozenset(),
    LN: frozenset(),
}


class IllegalTransition(ValueError):
    pass


class InfeasibleRoot(ValueError):
    pass


class Degenerate(ValueError):
    pass


class SearchState:
    __slots__ = ("graph", "root", "labels", "parent", "contractions")

    def __init__(self, graph: DiGraph, root: int, labels: dict, parent: dict,
                 contractions: tuple[ContractionRecord, ...] = ()):
        self.graph = graph
        self.root = root
        self.labels = labels
        self.parent = parent
        self.contractions = contractions

    def copy(self) -> SearchState:
        return SearchState(self.graph.copy(), self.root, dict(self.labels),
                           dict(self.parent), self.contractions)

    def __repr__(self) -> str:
        labs = " ".join(f"{v}:{self.labels[v].value}" for v in sorted(self.labels))
        return f"SearchState(root={self.root}, {labs}, T={sorted(self.tree)}, arcs={self.graph.arcs()})"

    @property
    def tree(self) -> set[Arc]:
        return {(p, c) for c, p in self.parent.items()}

    def tree_vertices(self) -> set[int]:
        return {v for v, lab in self.labels.items() if lab in (IN, LN, BN)}

    def with_label(self, label: Label) -> list[int]:
        return sorted(v for v, lab in self.labels.items() if lab is label)

    def count(self, label: Label) -> int:
        return sum(1 for lab in self.labels.values() if lab is label)

    def bn(self, i: int) -> list[int]:
        """BN vertices of out-degree ``i``."""
        g = self.graph
        return [v for v in self.with_label(BN) if g.out_degree(v) == i]

    def free(self, i: int) -> list[int]:
        """FREE vertices of in-degree ``i``."""
        g = self.graph
        return [v for v in self.with_label(FREE) if g.in_degree(v) == i]

    def key(self):
        """Hashable snapshot, used for equality in tests."""
        return (self.root, tuple(sorted((v, l.value) for v, l in self.labels.items())),
                tuple(sorted(self.parent.items())), tuple(self.graph.arcs()),
                tuple((c.a, c.b) for c in self.contractions))

    # in-place primitives ---------------------------------------------------

    def _relabel(self, v: int, label: Label) -> None:
        cur = self.labels[v]
        if label not in TRANSITIONS[cur]:
            raise IllegalTransition(f"{v}: {cur.value} -> {label.value}")
        self.labels[v] = label

    def _internalize(self, v: int) -> list[int]:
        """BN -> IN, attaching every out-neighbour that is not yet in the tree.

        Out-arcs into vertices that already have a parent (or are the root)
        can never be tree arcs and are dropped.  Returns the attached vertices.
        """
        if self.labels[v] is not BN:
            raise IllegalTransition(f"{v}: {self.labels[v].value} -> IN")
        self.labels[v] = IN
        g = self.graph
        attached = []
        for u in sorted(g.succ[v]):
            lab = self.labels[u]
            if lab is FREE:
                self.labels[u] = BN
            elif lab is FL:
                self.labels[u] = LN
            else:
                g.remove_arc(v, u)
                continue
            self.parent[u] = v
            attached.append(u)
        return attached

    def _make_leaf(self, v: int) -> None:
        if self.labels[v] is not BN:
            raise IllegalTransition(f"{v}: {self.labels[v].value} -> LN")
        self.labels[v] = LN

    def _float(self, v: int) -> None:
        if self.labels[v] is not FREE:
            raise IllegalTransition(f"{v}: {self.labels[v].value} -> FL")
        self.labels[v] = FL

    def _contract(self, a: int, b: int) -> None:
        rec = self.graph.contract(a, b)
        del self.labels[b]
        self.contractions = self.contractions + (rec,)


def initial_state(g: DiGraph, r: int) -> SearchState:
    """Root labelled IN with every out-neighbour attached as BN."""
    if len(g) < 2:
        raise Degenerate("the rooted search needs at least two vertices")
    if r not in g:
        raise ValueError(f"root {r} not in graph")
    if len(g.reachable_from(r)) != len(g):
        raise InfeasibleRoot(f"not every vertex is reachable from {r}")
    s = SearchState(g.copy(), r, {v: FREE for v in g.vertices}, {})
    s.labels[r] = BN
    s._internalize(r)
    return s


def set_internal(s: SearchState, v: int) -> SearchState:
    t = s.copy()
    t._internalize(v)
    return t


def set_leaf(s: SearchState, v: int) -> SearchState:
    """BN -> LN.  Floating leaves only become LN by being attached via an in-neighbour."""
    t = s.copy()
    t._make_leaf(v)
    return t


def is_spanning(s: SearchState) -> bool:
    return not any(lab in (FREE, FL) for lab in s.labels.values())


def leaf_count(s: SearchState) -> int:
    return s.count(LN)


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    reductions: Counter = field(default_factory=Counter)
    branch_cases: Counter = field(default_factory=Counter)
    audits: list = field(default_factory=list)
    memo_lookups: int = 0

    def merge(self, other: SearchStats) -> None:
        self.nodes_expanded += other.nodes_expanded
        self.max_depth = max(self.max_depth, other.max_depth)
        self.reductions.update(other.reductions)
        self.branch_cases.update(other.branch_cases)
        self.audits.extend(other.audits)
        self.memo_lookups += other.memo_lookups

    @property
    def max_branching_number(self) -> float:
        return max((a.gate_branching_number for a in self.audits), default=1.0)


@dataclass
class SolveResult:
    feasible: bool
    leaf_count: int
    tree: frozenset = frozenset()
    root: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)
