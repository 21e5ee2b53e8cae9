"""Per-case summary of the measure audit over a random corpus.

For each branching case: how often it fired, the worst branching number, and
how many nodes fell short of the claimed decrease, both after the child's
reductions (the gated window) and right after its assignments.
"""

import argparse
from collections import defaultdict

from dmlst import SolverConfig, solve_rooted
from dmlst.cli import generate_random
from dmlst.measure import GATED_CLAIMS, SCALE, branching_number


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs=2, default=(6, 12), metavar=("LO", "HI"))
    ap.add_argument("--p", type=float, nargs="+", default=(0.3, 0.4, 0.5))
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = defaultdict(lambda: {"count": 0, "tau": 1.0, "early_tau": 1.0, "short": 0, "early": 0})
    span = args.n[1] - args.n[0] + 1
    for i in range(args.count):
        n = args.n[0] + i % span
        g = generate_random(n, args.p[i % len(args.p)], args.seed + i)
        for r in g.vertices:
            if len(g.reachable_from(r)) != n:
                continue
            for a in solve_rooted(g, r, SolverConfig(audit=True)).stats.audits:
                row = rows[a.case]
                row["count"] += 1
                row["tau"] = max(row["tau"], a.gate_branching_number)
                if all(o > 0 for o in a.observed):
                    tau = branching_number([o / SCALE for o in a.observed])
                    row["early_tau"] = max(row["early_tau"], tau)
                if a.claimed is not None and a.case in GATED_CLAIMS:
                    row["short"] += any(x < c for x, c in zip(a.reduced, a.claimed))
                    row["early"] += any(x < c for x, c in zip(a.observed, a.claimed))

    print(f"{'case':<6} {'nodes':>7} {'max tau':>8} {'short':>6} | {'early tau':>9} {'early short':>11}")
    for case in sorted(rows):
        r = rows[case]
        print(f"{case:<6} {r['count']:>7} {r['tau']:>8.4f} {r['short']:>6} | "
              f"{r['early_tau']:>9.4f} {r['early']:>11}")


if __name__ == "__main__":
    main()
