"""Measure & Conquer bookkeeping: the weighted measure, claimed decrease
vectors per branching case, observed decreases and branching numbers.

Measure values are integers in units of 1e-4 (all weights have four
decimals), so sums and comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .state import BN, FL, FREE, SearchState

SCALE = 10_000

EPS_FL = 2251
EPS_BN1 = 6668
EPS_BN2 = 7749  # out-degree >= 2
EPS_FREE1 = 9762
EPS_FREE2 = 9935
EPS_FREE3 = 10000  # in-degree >= 3

ETA = min(
    EPS_FL,
    SCALE - EPS_BN1,
    SCALE - EPS_BN2,
    EPS_FREE2 - EPS_BN1,
    EPS_FREE2 - EPS_BN2,
    EPS_FREE1 - EPS_BN1,
    EPS_FREE1 - EPS_BN2,
)
# smallest gain of one make_leaves target: FREE -> FL or BN(2) -> LN
MAKELEAF_GAIN = min(EPS_FREE1 - EPS_FL, EPS_BN2)

TAU_BOUND = 1.9043


def eps_free(indeg: int) -> int:
    # in-degree 0 only exists for the instant before H1 halts; weigh it like 1
    if indeg <= 1:
        return EPS_FREE1
    if indeg == 2:
        return EPS_FREE2
    return EPS_FREE3


def eps_bn(outdeg: int) -> int:
    return EPS_BN1 if outdeg <= 1 else EPS_BN2


def delta_free(i: int) -> int:
    """Drop in weight when a FREE vertex's in-degree falls from ``i`` to ``i - 1``."""
    if i == 1:
        return EPS_FREE1
    if i in (2, 3):
        return eps_free(i) - eps_free(i - 1)
    return 0


def weight(s: SearchState, v: int) -> int:
    lab = s.labels[v]
    if lab is FREE:
        return eps_free(len(s.graph.pred[v]))
    if lab is BN:
        return eps_bn(len(s.graph.succ[v]))
    if lab is FL:
        return EPS_FL
    return 0


def mu(s: SearchState) -> int:
    """Measure of ``s`` in units of 1e-4."""
    g = s.graph
    total = 0
    for v, lab in s.labels.items():
        if lab is FREE:
            total += eps_free(len(g.pred[v]))
        elif lab is BN:
            total += eps_bn(len(g.succ[v]))
        elif lab is FL:
            total += EPS_FL
    return total


class NonPositiveDelta(ValueError):
    pass


def branching_number(deltas, tol: float = 1e-12) -> float:
    """Unique tau >= 1 with sum(tau ** -d) == 1; a single child gives 1."""
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise ValueError("empty branching vector")
    if any(d <= 0 for d in deltas):
        raise NonPositiveDelta(deltas)
    if len(deltas) == 1:
        return 1.0
    lo, hi = 1.0, 64.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if sum(mid ** -d for d in deltas) > 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# -- claimed decreases --------------------------------------------------------

def _full(s, x) -> int:
    """Weight credited for a FREE neighbour of the pivot that leaves the measure."""
    d = len(s.graph.pred[x])
    return EPS_FREE3 if d >= 3 else (EPS_FREE2 if d == 2 else 0)


def _to_bn(s, x) -> int:
    d = len(s.graph.pred[x])
    return (EPS_FREE3 - EPS_BN2) if d >= 3 else ((EPS_FREE2 - EPS_BN2) if d == 2 else 0)


def _gain_out(s, x, v) -> int:
    """FL out-neighbours of x become LN, FREE ones become BN (outside N+(v))."""
    g, labels = s.graph, s.labels
    total = 0
    for w in g.succ[x] - g.succ[v] - {v}:
        if labels[w] is FL:
            total += EPS_FL
        elif labels[w] is FREE:
            total += _to_bn(s, w)
    return total


def _drop(s, x) -> int:
    return delta_free(len(s.graph.pred[x]))


def claimed_deltas(s: SearchState, d) -> list[int] | None:
    """Per-child decreases the case analysis guarantees, or None when not audited."""
    g, labels = s.graph, s.labels
    v = d.pivot
    case = d.case
    if case == "B2":
        chain = d.chain.vertices
        v1 = chain[1]
        k = len(chain) - 1
        in1 = len(g.pred[v1])
        d1 = (EPS_BN1 + (k - 1) * EPS_FREE1
              + (EPS_FREE2 if in1 == 2 else 0) + (EPS_FREE3 if in1 >= 3 else 0) + 2 * ETA)
        d2 = EPS_BN1 + (delta_free(in1) if in1 in (2, 3) else 0)
        return [d1, d2]
    if case == "B3a":
        d1 = EPS_BN2
        d2 = EPS_BN2
        for x in g.succ[v]:
            if labels[x] is FL:
                d1 += EPS_FL
            elif labels[x] is FREE:
                d1 += _to_bn(s, x)
                indeg = len(g.pred[x])
                if indeg in (2, 3):
                    d2 += delta_free(indeg)
        return [d1, d2]
    if case == "B3b":
        return [EPS_BN2 + 2 * EPS_FL + MAKELEAF_GAIN, EPS_BN2]
    if case in ("B4.1", "B4.2"):
        return [EPS_BN2 + EPS_FREE2 + min(EPS_FL, EPS_FREE2 - EPS_BN2), EPS_BN2]
    if case == "B5":
        x1 = d.x1
        d1 = EPS_BN2 + EPS_FREE2 + EPS_FL + _gain_out(s, x1, v)
        d2 = EPS_BN2 + EPS_FREE2 + EPS_FL + MAKELEAF_GAIN
        return [d1, d2, EPS_BN2]
    if case in ("B6", "B7"):
        x1, x2 = d.x1, d.x2
        d1 = EPS_BN2 + _full(s, x1) + _to_bn(s, x2) + _gain_out(s, x1, v)
        d2 = EPS_BN2 + _full(s, x1) + _full(s, x2) + _gain_out(s, x2, v)
        in1, in2 = len(g.pred[x1]), len(g.pred[x2])
        d3 = EPS_BN2 + _full(s, x1) + _full(s, x2) + max(2, in1 + in2 - 4) * MAKELEAF_GAIN
        d4 = EPS_BN2 + _drop(s, x1) + _drop(s, x2)
        return [d1, d2, d4] if case == "B6" else [d1, d2, d3, d4]
    if case == "B8a":
        return [EPS_BN2 + 2 * (EPS_FREE2 - EPS_BN2), EPS_BN2 + EPS_FREE1]
    if case == "B8b":
        return [EPS_BN2 + 2 * (EPS_FREE2 - EPS_BN2), EPS_BN2 + EPS_FREE2 + EPS_BN2]
    return None


# cases whose claimed vectors are gated by the audit
GATED_CLAIMS = frozenset({"B2", "B3a", "B3b", "B4.1", "B4.2", "B5", "B7", "B8a", "B8b"})


@dataclass
class BranchAudit:
    """One branching node.

    ``observed`` are decreases right after each child's assignments (and
    make_leaves); ``reduced`` are decreases after the child's reduction
    fixpoint, with a halted child counted as dropping to measure 0.
    Claimed vectors are compared against ``reduced``: the case analysis
    credits rule firings (R1/R2/R4/R5/R6) that happen in the child.
    """

    case: str
    measure: int
    observed: list
    reduced: list
    claimed: list | None = None
    branching_number: float = 1.0
    composite: list | None = None
    composite_branching_number: float | None = None
    depth: int = 0

    @property
    def gate_branching_number(self) -> float:
        if self.composite_branching_number is not None:
            return self.composite_branching_number
        return self.branching_number

    @property
    def claim_violations(self) -> list[int]:
        if self.claimed is None:
            return []
        return [i for i, (r, c) in enumerate(zip(self.reduced, self.claimed)) if r < c]

    @property
    def bound_violated(self) -> bool:
        return self.gate_branching_number > TAU_BOUND + 1e-9

    @property
    def measure_violated(self) -> bool:
        return any(o <= 0 for o in self.observed) or any(
            r < o for r, o in zip(self.reduced, self.observed))

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "measure": self.measure / SCALE,
            "observed": [x / SCALE for x in self.observed],
            "reduced": [x / SCALE for x in self.reduced],
            "claimed": None if self.claimed is None else [x / SCALE for x in self.claimed],
            "tau": self.branching_number,
            "composite_tau": self.composite_branching_number,
        }


def audit_branch(parent: SearchState, decision, children, reduced) -> BranchAudit:
    """``children`` are the post-assignment states; ``reduced`` the matching
    fixpoint states, or None for children that halted."""
    m = mu(parent)
    observed = [m - mu(c) for c in children]
    red = [m if r is None else m - mu(r) for r in reduced]
    claimed = claimed_deltas(parent, decision)
    tau = branching_number([x / SCALE for x in red]) if all(x > 0 for x in red) else float("inf")
    return BranchAudit(decision.case, m, observed, red, claimed, tau)


def compose(audit: BranchAudit, child_index: int, sub: BranchAudit | None) -> None:
    """Fold the branching performed in one child into this node's vector.

    Used for B4.3, whose analysis covers the node together with the next
    branching in its first child.
    """
    vec = list(audit.reduced)
    if sub is not None:
        base = vec.pop(child_index)
        for j, x in enumerate(sub.reduced):
            vec.insert(child_index + j, base + x)
    audit.composite = vec
    audit.composite_branching_number = branching_number([x / SCALE for x in vec])
