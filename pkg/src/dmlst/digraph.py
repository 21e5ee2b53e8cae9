"""Simple directed graphs over dense integer vertex ids.

Adjacency is kept as ``succ``/``pred`` dictionaries of sets.  Every query
that returns an ordered result iterates in ascending id order, so anything
built on top of this module is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

Arc = tuple[int, int]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ContractionRecord:
    """Enough information to undo ``DiGraph.contract(a, b)`` on a tree."""

    a: int
    b: int
    a_in: frozenset[int]
    a_out: frozenset[int]
    b_in: frozenset[int]
    b_out: frozenset[int]

    def expand(self, arcs: Iterable[Arc]) -> set[Arc]:
        """Map an arc set of the contracted graph back to the graph before contraction.

        Arcs touching the merged vertex are re-targeted to whichever of ``a``/``b``
        originally carried them (``a`` wins when both did) and ``(a, b)`` is re-inserted.
        """
        a, b = self.a, self.b
        out = set()
        for p, c in arcs:
            if c == a:
                if p in self.a_in:
                    out.add((p, a))
                elif p in self.b_in:
                    out.add((p, b))
                else:
                    raise GraphError(f"arc ({p},{a}) not present before contraction")
            elif p == a:
                if c in self.a_out:
                    out.add((a, c))
                elif c in self.b_out:
                    out.add((b, c))
                else:
                    raise GraphError(f"arc ({a},{c}) not present before contraction")
            else:
                out.add((p, c))
        out.add((a, b))
        return out


class DiGraph:
    """Mutable simple digraph; no self-loops, no parallel arcs."""

    __slots__ = ("succ", "pred")

    def __init__(self, n: int = 0, arcs: Iterable[Arc] = ()):
        self.succ: dict[int, set[int]] = {v: set() for v in range(n)}
        self.pred: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in arcs:
            self.add_arc(u, v)

    def copy(self) -> DiGraph:
        g = DiGraph.__new__(DiGraph)
        g.succ = {v: set(s) for v, s in self.succ.items()}
        g.pred = {v: set(s) for v, s in self.pred.items()}
        return g

    def __len__(self) -> int:
        return len(self.succ)

    def __contains__(self, v) -> bool:
        return v in self.succ

    def __eq__(self, other) -> bool:
        return isinstance(other, DiGraph) and self.succ == other.succ

    def __repr__(self) -> str:
        return f"DiGraph(vertices={self.vertices}, arcs={self.arcs()})"

    @property
    def vertices(self) -> list[int]:
        return sorted(self.succ)

    def arcs(self) -> list[Arc]:
        return [(u, v) for u in sorted(self.succ) for v in sorted(self.succ[u])]

    @property
    def num_arcs(self) -> int:
        return sum(len(s) for s in self.succ.values())

    def add_arc(self, u: int, v: int) -> None:
        if u == v:
            raise GraphError(f"self-loop at {u}")
        if u not in self.succ or v not in self.succ:
            raise GraphError(f"arc ({u},{v}) has an endpoint outside the graph")
        self.succ[u].add(v)
        self.pred[v].add(u)

    def remove_arc(self, u: int, v: int) -> None:
        if v not in self.succ.get(u, ()):
            raise GraphError(f"no arc ({u},{v})")
        self.succ[u].discard(v)
        self.pred[v].discard(u)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.succ.get(u, ())

    def out_neighbors(self, v: int, restrict=None) -> set[int]:
        if restrict is None:
            return set(self.succ[v])
        return self.succ[v] & set(restrict)

    def in_neighbors(self, v: int, restrict=None) -> set[int]:
        if restrict is None:
            return set(self.pred[v])
        return self.pred[v] & set(restrict)

    def out_degree(self, v: int) -> int:
        return len(self.succ[v])

    def in_degree(self, v: int) -> int:
        return len(self.pred[v])

    def degree(self, v: int) -> int:
        return len(self.succ[v]) + len(self.pred[v])

    def reachable_from(self, r: int, removed_arcs: Iterable[Arc] = ()) -> set[int]:
        removed = set(removed_arcs)
        seen = {r}
        stack = [r]
        succ = self.succ
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if w not in seen and (not removed or (u, w) not in removed):
                    seen.add(w)
                    stack.append(w)
        return seen

    def is_arc_cut(self, arcs: Iterable[Arc], root: int) -> bool:
        """True iff removing ``arcs`` loses root-reachability of some vertex."""
        arcs = set(arcs)
        if not arcs:
            return False
        return self.reachable_from(root, arcs) != self.reachable_from(root)

    def undirected_bridges(self) -> list[tuple[Arc, int, int]]:
        """Arcs that are bridges of the underlying undirected multigraph.

        Antiparallel arcs count as two parallel edges, so neither is a bridge.
        Each entry is ``(arc, size of the side holding arc[0], size of the side holding arc[1])``.
        """
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.succ}
        edges = self.arcs()
        for i, (u, v) in enumerate(edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        disc: dict[int, int] = {}
        low: dict[int, int] = {}
        sub: dict[int, int] = {}
        found: list[tuple[int, int]] = []  # (edge index, child vertex)
        counter = [0]

        def dfs(u: int, via: int) -> None:
            disc[u] = low[u] = counter[0]
            counter[0] += 1
            sub[u] = 1
            for w, i in adj[u]:
                if i == via:
                    continue
                if w in disc:
                    low[u] = min(low[u], disc[w])
                else:
                    dfs(w, i)
                    sub[u] += sub[w]
                    low[u] = min(low[u], low[w])
                    if low[w] > disc[u]:
                        found.append((i, w))

        result = []
        for s in sorted(self.succ):
            if s in disc:
                continue
            start = len(found)
            dfs(s, -1)
            comp = sub[s]
            for i, child in found[start:]:
                u, v = edges[i]
                inner = sub[child]
                if child == v:
                    result.append(((u, v), comp - inner, inner))
                else:
                    result.append(((u, v), inner, comp - inner))
        result.sort()
        return result

    def scc(self) -> list[set[int]]:
        """Strongly connected components (Tarjan), sorted by smallest member."""
        index: dict[int, int] = {}
        low: dict[int, int] = {}
        stack: list[int] = []
        on_stack: set[int] = set()
        comps: list[set[int]] = []

        def connect(v: int) -> None:
            index[v] = low[v] = len(index)
            stack.append(v)
            on_stack.add(v)
            for w in sorted(self.succ[v]):
                if w not in index:
                    connect(w)
                    low[v] = min(low[v], low[w])
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(comp)

        for v in sorted(self.succ):
            if v not in index:
                connect(v)
        comps.sort(key=min)
        return comps

    def contract(self, a: int, b: int) -> ContractionRecord:
        """Merge ``b`` into ``a`` in place; ``b`` is retired."""
        if not self.has_arc(a, b):
            raise GraphError(f"cannot contract missing arc ({a},{b})")
        rec = ContractionRecord(
            a, b,
            frozenset(self.pred[a]), frozenset(self.succ[a]),
            frozenset(self.pred[b]), frozenset(self.succ[b]),
        )
        for u in list(self.pred[b]):
            self.remove_arc(u, b)
            if u != a:
                self.succ[u].add(a)
                self.pred[a].add(u)
        for w in list(self.succ[b]):
            self.remove_arc(b, w)
            if w != a:
                self.succ[a].add(w)
                self.pred[w].add(a)
        del self.succ[b]
        del self.pred[b]
        return rec

    def induced(self, keep: Iterable[int]) -> tuple[DiGraph, list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; also returns the new-to-old id map."""
        old = sorted(keep)
        pos = {v: i for i, v in enumerate(old)}
        g = DiGraph(len(old))
        for u in old:
            for w in self.succ[u]:
                if w in pos:
                    g.add_arc(pos[u], pos[w])
        return g, old
