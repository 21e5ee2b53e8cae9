"""Recursive branch-and-reduce search for the rooted problem and the
all-roots wrapper.

Search nodes work in the contracted id space; the witness tree is mapped back
to original ids once, by replaying the contraction log in reverse.
"""

from __future__ import annotations

from dataclasses import dataclass

from .branch import apply_child, select_case, select_naive
from .digraph import Arc, DiGraph
from .measure import audit_branch, compose
from .reduce import ALL_RULES, NO_CONTRACTION, reduce_fixpoint
from .state import BN, FL, FREE, SearchState, SearchStats, SolveResult, initial_state

VARIANTS = ("branch", "naive", "memo")


class Timeout(RuntimeError):
    def __init__(self, stats: SearchStats):
        super().__init__(f"node limit exceeded after {stats.nodes_expanded} nodes")
        self.stats = stats


class InvalidWitness(AssertionError):
    pass


@dataclass
class SolverConfig:
    variant: str = "branch"
    audit: bool = False
    node_limit: int | None = None
    alpha: float = 0.3
    reverse_children: bool = False  # for order-invariance checks only

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


class Search:
    """One rooted search.  ``cutover(state)`` may short-circuit a node (memo phase 2).

    ``hook(kind, state, event)`` sees every node before reduction
    (``kind == "node"``, event None) and every reduction event after it fires
    (``kind == "event"``).  Hooks must not modify the state.
    """

    def __init__(self, cfg: SolverConfig, rules=ALL_RULES, chooser=select_case,
                 cutover=None, hook=None):
        self.cfg = cfg
        self.rules = rules
        self.chooser = chooser
        self.cutover = cutover
        self.hook = hook
        self.stats = SearchStats()

    def run(self, state: SearchState):
        """Best ``(leaves, final)`` over extensions of ``state``, or None.

        ``final`` is the solved leaf state, or a ready arc set when a cutover answered.
        """
        res, _ = self._resolve(self._reduce(state), 0)
        return res

    def _reduce(self, state):
        on_event = None
        if self.hook is not None:
            self.hook("node", state, None)
            on_event = lambda t, ev: self.hook("event", t, ev)
        red = reduce_fixpoint(state, self.rules, on_event)
        self.stats.reductions.update(ev.rule for ev in red.events)
        return red

    def _resolve(self, red, depth):
        st = self.stats
        st.nodes_expanded += 1
        st.max_depth = max(st.max_depth, depth)
        if self.cfg.node_limit is not None and st.nodes_expanded > self.cfg.node_limit:
            raise Timeout(st)
        if red.halt.kind == "solved":
            return (red.halt.leaves, red.state), None
        if red.halt.kind == "no":
            return None, None
        if self.cutover is not None:
            hit = self.cutover(red.state)
            if hit is not NotImplemented:
                st.memo_lookups += 1
                return hit, None
        return self._branch(red.state, depth)

    def _branch(self, s, depth):
        d = self.chooser(s)
        self.stats.branch_cases[d.case] += 1
        order = range(len(d.children))
        if self.cfg.reverse_children:
            order = reversed(order)
        best = None
        children, reduced, subs = {}, {}, {}
        for i in order:
            child = apply_child(s, d, i)
            red = self._reduce(child)
            res, sub = self._resolve(red, depth + 1)
            children[i] = child
            reduced[i] = None if red.halt.halted else red.state
            subs[i] = sub
            if res is not None and (best is None or res[0] > best[0]):
                best = res
        audit = None
        if self.cfg.audit:
            idx = range(len(d.children))
            audit = audit_branch(s, d, [children[i] for i in idx], [reduced[i] for i in idx])
            audit.depth = depth
            if d.case == "B4.3":
                compose(audit, 0, subs[0])
            self.stats.audits.append(audit)
        return best, audit


def expand_tree(final: SearchState) -> set[Arc]:
    arcs = final.tree
    for rec in reversed(final.contractions):
        arcs = rec.expand(arcs)
    return arcs


def validate_witness(g: DiGraph, root: int, arcs) -> int:
    """Check ``arcs`` is a spanning out-branching of ``g`` rooted at ``root``; return its leaf count."""
    arcs = set(arcs)
    parent = {}
    for u, v in arcs:
        if not g.has_arc(u, v):
            raise InvalidWitness(f"arc ({u},{v}) not in graph")
        if v in parent:
            raise InvalidWitness(f"vertex {v} has two parents")
        parent[v] = u
    if root in parent:
        raise InvalidWitness("root has a parent")
    if set(parent) | {root} != set(g.vertices) or len(arcs) != len(g) - 1:
        raise InvalidWitness("not spanning")
    if _tree_reach(arcs, root) != set(g.vertices):
        raise InvalidWitness("not connected from the root")
    tails = {u for u, _ in arcs}
    return sum(1 for v in g.vertices if v != root and v not in tails)


def _tree_reach(arcs, root):
    kids = {}
    for u, v in arcs:
        kids.setdefault(u, []).append(v)
    seen = {root}
    stack = [root]
    while stack:
        for w in kids.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _rooted(g: DiGraph, r: int, cfg: SolverConfig, rules, chooser, cutover=None,
            hook=None) -> SolveResult:
    if len(g) == 0:
        raise ValueError("empty graph")
    if r not in g:
        raise ValueError(f"root {r} not in graph")
    if len(g) == 1:
        return SolveResult(True, 0, frozenset(), r)
    if len(g.reachable_from(r)) != len(g):
        return SolveResult(False, 0, frozenset(), r)
    search = Search(cfg, rules, chooser, cutover, hook)
    found = search.run(initial_state(g, r))
    if found is None:
        return SolveResult(False, 0, frozenset(), r, search.stats)
    leaves, final = found
    arcs = final if isinstance(final, (set, frozenset)) else expand_tree(final)
    got = validate_witness(g, r, arcs)
    if got != leaves:
        raise InvalidWitness(f"witness has {got} leaves, search reported {leaves}")
    return SolveResult(True, leaves, frozenset(arcs), r, search.stats)


def solve_rooted(g: DiGraph, r: int, cfg: SolverConfig | None = None, hook=None) -> SolveResult:
    cfg = cfg or SolverConfig()
    if cfg.variant == "naive":
        return solve_naive_bn(g, r, cfg)
    if cfg.variant == "memo":
        from .memo import solve_memoized
        return solve_memoized(g, r, cfg.alpha, cfg)
    return _rooted(g, r, cfg, ALL_RULES, select_case, hook=hook)


def solve_naive_bn(g: DiGraph, r: int, cfg: SolverConfig | None = None, cutover=None) -> SolveResult:
    """Chain cases B1/B2, else a binary branch on a max-out-degree BN vertex; no R6."""
    cfg = cfg or SolverConfig(variant="naive")
    if cfg.audit:
        cfg = SolverConfig("naive", False, cfg.node_limit, cfg.alpha, cfg.reverse_children)
    return _rooted(g, r, cfg, NO_CONTRACTION, select_naive, cutover)


def solve(g: DiGraph, cfg: SolverConfig | None = None) -> SolveResult:
    """Best over all roots (ascending; ties keep the smaller root)."""
    cfg = cfg or SolverConfig()
    if len(g) == 0:
        raise ValueError("empty graph")
    stats = SearchStats()
    best = None
    table = None
    if cfg.variant == "memo":
        from .memo import MemoTable
        table = MemoTable(g, cfg.alpha)
    for r in g.vertices:
        if len(g.reachable_from(r)) != len(g):
            continue
        if table is not None:
            from .memo import solve_memoized
            res = solve_memoized(g, r, cfg.alpha, cfg, table=table)
        else:
            res = solve_rooted(g, r, cfg)
        stats.merge(res.stats)
        if res.feasible and (best is None or res.leaf_count > best.leaf_count):
            best = res
    if best is None:
        return SolveResult(False, 0, frozenset(), None, stats)
    return SolveResult(True, best.leaf_count, best.tree, best.root, stats)


def remaining_region(s: SearchState) -> list[int]:
    """Vertices whose fate is still open: FREE, FL and BN."""
    return sorted(v for v, lab in s.labels.items() if lab in (FREE, FL, BN))
