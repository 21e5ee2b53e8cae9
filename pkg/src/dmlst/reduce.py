"""Halting rules H1-H3 and reduction rules R1-R6.

The fixpoint driver checks the halting rules, then applies the first
applicable reduction (strict rule priority, lowest vertex/arc first), and
repeats until a halting rule fires or nothing applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .state import BN, FL, FREE, IN, LN, SearchState

ALL_RULES = ("R1", "R2", "R3", "R4", "R5", "R6")
NO_CONTRACTION = ("R1", "R2", "R3", "R4", "R5")


@dataclass(frozen=True)
class Halt:
    kind: str  # "none" | "no" | "solved"
    rule: str | None = None
    leaves: int | None = None

    @property
    def halted(self) -> bool:
        return self.kind != "none"


NO_HALT = Halt("none")


@dataclass(frozen=True)
class ReductionEvent:
    rule: str
    vertices: tuple = ()
    arcs: tuple = ()


@dataclass
class Reduction:
    state: SearchState
    events: list = field(default_factory=list)
    halt: Halt = NO_HALT


def check_halt(s: SearchState) -> Halt:
    g, labels = s.graph, s.labels
    for v in sorted(labels):
        if labels[v] in (FREE, FL) and not g.pred[v]:
            return Halt("no", "H1")
    if not any(lab is BN for lab in labels.values()):
        if any(lab in (FREE, FL) for lab in labels.values()):
            return Halt("no", "H2")
        return Halt("solved", "H2", s.count(LN))
    if any(lab is FL for lab in labels.values()):
        for (u, v), su, sv in g.undirected_bridges():
            if labels[v] is FL and su >= 2 and sv >= 2 and s.parent.get(v) != u:
                return Halt("no", "H3")
    return NO_HALT


# Each rule scans in ascending order, applies itself at the first place it
# fits, and returns the event (or None when it does not apply).

def _r1(s: SearchState):
    g, labels, parent = s.graph, s.labels, s.parent
    for v in sorted(labels):
        lab = labels[v]
        if lab is FL and g.succ[v]:
            arcs = tuple((v, w) for w in sorted(g.succ[v]))
        elif lab in (BN, IN):
            p = parent.get(v)
            arcs = tuple((u, v) for u in sorted(g.pred[v]) if u != p)
        else:
            continue
        if arcs:
            for a in arcs:
                g.remove_arc(*a)
            return ReductionEvent("R1", (v,), arcs)
    return None


def _r2(s: SearchState):
    g = s.graph
    for v in s.with_label(BN):
        if not g.succ[v]:
            s._make_leaf(v)
            return ReductionEvent("R2", (v,))
    return None


def _r3(s: SearchState):
    g = s.graph
    for v in s.with_label(FREE):
        if g.degree(v) == 1:
            s._float(v)
            return ReductionEvent("R3", (v,))
    return None


def _r4(s: SearchState):
    g = s.graph
    for v in s.with_label(LN):
        p = s.parent.get(v)
        arcs = tuple((u, v) for u in sorted(g.pred[v]) if u != p)
        arcs += tuple((v, w) for w in sorted(g.succ[v]))
        if arcs:
            for a in arcs:
                g.remove_arc(*a)
            return ReductionEvent("R4", (v,), arcs)
    return None


def _r5(s: SearchState):
    g = s.graph
    bns = s.with_label(BN)
    if not bns:
        return None
    reach = g.reachable_from(s.root)
    for u in bns:
        out = [(u, w) for w in g.succ[u]]
        if out and len(g.reachable_from(s.root, out)) != len(reach):
            attached = s._internalize(u)
            return ReductionEvent("R5", (u, *attached))
    return None


def mandatory_arc(s: SearchState, a: int, b: int, reach=None) -> bool:
    """Every root path into some set S (b in S, |S| >= 2) must use (a, b)."""
    g = s.graph
    if reach is None:
        reach = g.reachable_from(s.root)
    cut = reach - g.reachable_from(s.root, [(a, b)])
    if b not in cut or len(cut) < 2:
        return False
    for w in cut:
        for u in g.pred[w]:
            if u not in cut and (u, w) != (a, b):
                return False
    return True


def _r6(s: SearchState):
    g, labels = s.graph, s.labels
    frees = s.with_label(FREE)
    if len(frees) < 2:
        return None
    reach = g.reachable_from(s.root)
    for a in frees:
        for b in sorted(g.succ[a]):
            if labels[b] is FREE and g.succ[b] and mandatory_arc(s, a, b, reach):
                s._contract(a, b)
                return ReductionEvent("R6", (a, b), ((a, b),))
    return None


RULES = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6}


def _apply_first(s: SearchState, rules) -> ReductionEvent | None:
    for name in rules:
        ev = RULES[name](s)
        if ev is not None:
            return ev
    return None


def reduce_once(s: SearchState, rules=ALL_RULES) -> tuple[SearchState, ReductionEvent] | None:
    """Apply the single highest-priority applicable rule to a copy of ``s``."""
    t = s.copy()
    ev = _apply_first(t, rules)
    if ev is None:
        return None
    return t, ev


def reduce_fixpoint(s: SearchState, rules=ALL_RULES, on_event=None) -> Reduction:
    """Exhaustive reduction with halting checks after every event.

    ``on_event(state, event)`` is called after each event with the live state.
    The input state is never modified.
    """
    t = s.copy()
    events = []
    while True:
        halt = check_halt(t)
        if halt.halted:
            return Reduction(t, events, halt)
        ev = _apply_first(t, rules)
        if ev is None:
            return Reduction(t, events, NO_HALT)
        events.append(ev)
        if on_event is not None:
            on_event(t, ev)
