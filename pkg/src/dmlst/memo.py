"""Exponential-space variant: a naive branching phase that hands small
leftover regions to a table of precomputed optimal completions.

A table key is a vertex set of the input graph together with which of those
vertices are already attached (BN) and which are floating leaves (FL).  Its
entry is an optimal out-branching of the augmented graph that adds a fresh
root ``r'`` with arcs to a fresh vertex ``y`` and to every BN vertex, with FL
vertices forced to stay leaves.  Entries are filled lazily on first lookup;
``build_table`` fills every key up front.
"""

from __future__ import annotations

import itertools
import json
import math
import zlib
from dataclasses import dataclass

from .digraph import DiGraph
from .reduce import ALL_RULES
from .branch import select_case
from .solver import Search, SolverConfig, solve_naive_bn, remaining_region, expand_tree
from .state import BN, FL, LN, SearchState, SolveResult, initial_state

MAGIC = b"DMLSTMEMO"
FORMAT_VERSION = 1


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MemoKey:
    vertex_set: tuple[int, ...]
    bn_set: tuple[int, ...]
    fl_set: tuple[int, ...]

    @classmethod
    def of(cls, vertices, bn=(), fl=()) -> MemoKey:
        return cls(tuple(sorted(vertices)), tuple(sorted(bn)), tuple(sorted(fl)))


@dataclass(frozen=True)
class MemoEntry:
    """Best completion: arcs among original ids (r'/y arcs dropped) and its
    leaf count, not counting ``y``.  ``leaves is None`` marks an empty entry."""

    arcs: frozenset = frozenset()
    leaves: int | None = None

    @property
    def empty(self) -> bool:
        return self.leaves is None


EMPTY = MemoEntry()


def cutoff(n: int, alpha: float) -> int:
    return math.ceil(alpha * n - 1e-12)


def augmented_instance(g: DiGraph, key: MemoKey):
    """The augmented graph for ``key``: ids 0 = r', 1 = y, then ``key.vertex_set`` in order."""
    old = list(key.vertex_set)
    sub, _ = g.induced(old)
    aug = DiGraph(len(old) + 2)
    for u, v in sub.arcs():
        aug.add_arc(u + 2, v + 2)
    aug.add_arc(0, 1)
    pos = {v: i + 2 for i, v in enumerate(old)}
    for u in key.bn_set:
        aug.add_arc(0, pos[u])
    return aug, [None, None] + old


def solve_entry(g: DiGraph, key: MemoKey) -> MemoEntry:
    """Fill one entry with the branch-and-reduce search on the augmented instance."""
    aug, back = augmented_instance(g, key)
    if len(aug.reachable_from(0)) != len(aug):
        return EMPTY
    s = initial_state(aug, 0)
    pos = {v: i for i, v in enumerate(back) if v is not None}
    for v in key.fl_set:
        s._float(pos[v])
    found = Search(SolverConfig(), ALL_RULES, select_case).run(s)
    if found is None:
        return EMPTY
    leaves, final = found
    arcs = frozenset((back[u], back[v]) for u, v in expand_tree(final) if u != 0)
    return MemoEntry(arcs, leaves - 1)


class MemoTable:
    def __init__(self, g: DiGraph, alpha: float):
        self.graph = g
        self.alpha = alpha
        self.limit = cutoff(len(g), alpha)
        self.entries: dict[MemoKey, MemoEntry] = {}
        self.misses = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key) -> bool:
        return key in self.entries

    def lookup(self, key: MemoKey) -> MemoEntry:
        if len(key.vertex_set) > self.limit:
            raise KeyError(f"{key} is larger than the table cutoff {self.limit}")
        entry = self.entries.get(key)
        if entry is None:
            self.misses += 1
            entry = self.entries[key] = solve_entry(self.graph, key)
        return entry

    def keys(self):
        """Every key the table can hold."""
        verts = self.graph.vertices
        for size in range(self.limit + 1):
            for vs in itertools.combinations(verts, size):
                # each vertex is BN, FL or neither
                for marks in itertools.product((0, 1, 2), repeat=size):
                    bn = [v for v, m in zip(vs, marks) if m == 1]
                    fl = [v for v, m in zip(vs, marks) if m == 2]
                    yield MemoKey(vs, tuple(bn), tuple(fl))

    def size_bound(self) -> int:
        n = len(self.graph)
        return sum(math.comb(n, k) * 3 ** k for k in range(self.limit + 1))

    # serialization --------------------------------------------------------

    def dumps(self) -> bytes:
        payload = {
            "n": len(self.graph),
            "arcs": self.graph.arcs(),
            "alpha": self.alpha,
            "entries": [
                [list(k.vertex_set), list(k.bn_set), list(k.fl_set),
                 None if e.empty else sorted(e.arcs), e.leaves]
                for k, e in sorted(self.entries.items(), key=lambda kv: (
                    kv[0].vertex_set, kv[0].bn_set, kv[0].fl_set))
            ],
        }
        body = zlib.compress(json.dumps(payload, separators=(",", ":")).encode())
        return MAGIC + bytes([FORMAT_VERSION]) + body

    @classmethod
    def loads(cls, blob: bytes) -> MemoTable:
        if not blob.startswith(MAGIC):
            raise ValueError("not a memo table file")
        version = blob[len(MAGIC)]
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported memo table version {version}")
        payload = json.loads(zlib.decompress(blob[len(MAGIC) + 1:]))
        g = DiGraph(payload["n"], [tuple(a) for a in payload["arcs"]])
        table = cls(g, payload["alpha"])
        for vs, bn, fl, arcs, leaves in payload["entries"]:
            key = MemoKey(tuple(vs), tuple(bn), tuple(fl))
            table.entries[key] = EMPTY if arcs is None else MemoEntry(
                frozenset(tuple(a) for a in arcs), leaves)
        return table


def build_table(g: DiGraph, alpha: float, budget: int = 200_000) -> MemoTable:
    table = MemoTable(g, alpha)
    if table.size_bound() > budget:
        raise BudgetExceeded(f"{table.size_bound()} keys exceed the budget of {budget}")
    for key in table.keys():
        table.lookup(key)
    return table


def key_for(s: SearchState) -> MemoKey:
    region = remaining_region(s)
    return MemoKey.of(region,
                      [v for v in region if s.labels[v] is BN],
                      [v for v in region if s.labels[v] is FL])


def solve_memoized(g: DiGraph, r: int, alpha: float = 0.3, cfg: SolverConfig | None = None,
                   table: MemoTable | None = None) -> SolveResult:
    """Naive branching until at most ceil(alpha * n) vertices remain open, then a table lookup."""
    cfg = cfg or SolverConfig(variant="memo", alpha=alpha)
    if table is None:
        table = MemoTable(g, alpha)
    elif table.graph is not g and table.graph != g or table.alpha != alpha:
        raise ValueError("memo table was built for a different graph or alpha")

    def cutover(s: SearchState):
        region = remaining_region(s)
        if len(region) > table.limit:
            return NotImplemented
        entry = table.lookup(key_for(s))
        if entry.empty:
            return None
        return s.count(LN) + entry.leaves, frozenset(s.tree | entry.arcs)

    return solve_naive_bn(g, r, cfg, cutover=cutover)
