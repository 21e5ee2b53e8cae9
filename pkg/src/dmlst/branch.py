"""Case selection for the branching step (B1-B8), chain paths and ``make_leaves``.

``select_case`` expects a state that is at a reduction fixpoint and not
halted.  A decision lists, per child, assignments ``(vertex, IN|LN)`` that are
executed in order; a FREE vertex named in a later assignment has already been
attached as BN by an earlier one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .state import BN, FL, FREE, IN, LN, Label, SearchState


class ContractViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class ChainPath:
    vertices: tuple[int, ...]
    dead_end: bool


@dataclass(frozen=True)
class BranchDecision:
    case: str
    pivot: int
    children: tuple[tuple[tuple[int, Label], ...], ...]
    makeleaves_in: frozenset = frozenset()
    x1: int | None = None
    x2: int | None = None
    chain: ChainPath | None = None
    z: int | None = None
    q: int | None = None
    extra: dict = field(default_factory=dict, compare=False)


def find_chain(s: SearchState, v: int) -> ChainPath:
    g = s.graph
    if s.labels.get(v) is not BN or g.out_degree(v) != 1:
        raise ContractViolation(f"chain must start at a BN vertex of out-degree 1, got {v}")
    path = [v]
    prefix = {v}
    cur = next(iter(g.succ[v]))
    while True:
        path.append(cur)
        ext = g.succ[cur] - prefix
        prefix.add(cur)
        if not ext:
            return ChainPath(tuple(path), True)
        if s.labels[cur] is not FREE or len(ext) != 1:
            return ChainPath(tuple(path), False)
        cur = next(iter(ext))


def makeleaves_targets(s: SearchState, x1: int, x2: int, v: int) -> list[int]:
    g = s.graph
    return sorted((g.pred[x1] | g.pred[x2]) - {x1, x2, v})


def _make_leaves_inplace(s: SearchState, x1: int, x2: int, v: int) -> None:
    for u in makeleaves_targets(s, x1, x2, v):
        lab = s.labels[u]
        if lab is FREE:
            s._float(u)
        elif lab is BN:
            s._make_leaf(u)


def make_leaves(s: SearchState, x1: int, x2: int, v: int) -> SearchState:
    """FREE in-neighbours of ``x1``/``x2`` (other than ``v``) float, BN ones become leaves."""
    t = s.copy()
    _make_leaves_inplace(t, x1, x2, v)
    return t


def _pivot(s: SearchState) -> int:
    g = s.graph
    bns = s.with_label(BN)
    if not bns:
        raise ContractViolation("no BN vertex to branch on")
    return max(bns, key=lambda u: (g.out_degree(u), -u))


def _chain_decision(s: SearchState, v: int) -> BranchDecision:
    chain = find_chain(s, v)
    if chain.dead_end:
        return BranchDecision("B1", v, (((v, LN),),), chain=chain)
    inside = tuple((u, IN) for u in chain.vertices)
    return BranchDecision("B2", v, (inside, ((v, LN),)), chain=chain)


def select_case(s: SearchState) -> BranchDecision:
    g, labels = s.graph, s.labels
    bn1 = s.bn(1)
    if s.bn(0):
        raise ContractViolation("BN vertex of out-degree 0 left; reduce first")
    if bn1:
        return _chain_decision(s, bn1[0])

    v = _pivot(s)
    binary = (((v, IN),), ((v, LN),))
    if g.out_degree(v) >= 3:
        return BranchDecision("B3a", v, binary)
    assert all(g.out_degree(u) == 2 for u in s.with_label(BN))
    x1, x2 = sorted(g.succ[v])
    lx1, lx2 = labels[x1], labels[x2]
    if lx1 is FL and lx2 is FL:
        assert makeleaves_targets(s, x1, x2, v)
        return BranchDecision("B3b", v, binary, frozenset({0}), x1, x2)

    out_v = g.succ[v]
    frees = [x for x in (x1, x2) if labels[x] is FREE]
    for sub in ("B4.1", "B4.2", "B4.3"):
        for z in frees:
            ext = g.succ[z] - out_v
            if sub == "B4.1":
                hit = not ext
            elif sub == "B4.2":
                hit = g.is_arc_cut([(z, w) for w in g.succ[z]], s.root)
            else:
                hit = len(ext) == 1
            if hit:
                return BranchDecision(sub, v, binary, x1=x1, x2=x2, z=z)

    if len(frees) == 1:
        f = frees[0]
        fl = x2 if f == x1 else x1
        assert labels[fl] is FL and makeleaves_targets(s, f, fl, v)
        return BranchDecision(
            "B5", v,
            (((v, IN), (f, IN)), ((v, IN), (f, LN)), ((v, LN),)),
            frozenset({1}), f, fl,
        )

    common = (g.pred[x1] & g.pred[x2]) - {v}
    if common:
        return BranchDecision(
            "B6", v,
            (((v, IN), (x1, IN)), ((v, IN), (x1, LN), (x2, IN)), ((v, LN),)),
            x1=x1, x2=x2, z=min(common),
        )
    others = makeleaves_targets(s, x1, x2, v)
    if len(others) >= 2:
        assert g.pred[x1] & g.pred[x2] == {v}
        assert len(g.succ[x1] - out_v) >= 2 and len(g.succ[x2] - out_v) >= 2
        return BranchDecision(
            "B7", v,
            (((v, IN), (x1, IN)), ((v, IN), (x1, LN), (x2, IN)),
             ((v, IN), (x1, LN), (x2, LN)), ((v, LN),)),
            frozenset({2}), x1, x2,
        )
    case = "B8"
    q = others[0] if others else None
    if q is not None and labels[q] is FREE:
        case = "B8a"
    elif q is not None and labels[q] is BN:
        case = "B8b"
    return BranchDecision(case, v, binary, x1=x1, x2=x2, q=q)


def select_naive(s: SearchState) -> BranchDecision:
    """B1/B2 on BN vertices of out-degree 1, otherwise a plain binary branch."""
    if s.bn(0):
        raise ContractViolation("BN vertex of out-degree 0 left; reduce first")
    bn1 = s.bn(1)
    if bn1:
        return _chain_decision(s, bn1[0])
    v = _pivot(s)
    return BranchDecision("BN", v, (((v, IN),), ((v, LN),)))


def apply_assignments(s: SearchState, assignments) -> SearchState:
    t = s.copy()
    for u, target in assignments:
        lab = t.labels[u]
        if lab is target:
            continue
        if lab is not BN:
            raise ContractViolation(f"cannot set {u} ({lab.value}) to {target.value}")
        if target is IN:
            t._internalize(u)
        else:
            t._make_leaf(u)
    return t


def apply_child(s: SearchState, d: BranchDecision, i: int) -> SearchState:
    t = apply_assignments(s, d.children[i])
    if i in d.makeleaves_in:
        _make_leaves_inplace(t, d.x1, d.x2, d.pivot)
    return t
