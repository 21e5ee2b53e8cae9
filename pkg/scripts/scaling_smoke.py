"""Search-tree size and wall time on random digraphs, all roots."""

import argparse
import statistics
import time

from dmlst import SolverConfig, solve
from dmlst.cli import generate_random


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=18)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=90_000, help="first seed; instance i uses seed + i")
    ap.add_argument("--variant", choices=("branch", "naive", "memo"), default="branch")
    args = ap.parse_args()

    nodes, secs = [], []
    for i in range(args.count):
        g = generate_random(args.n, args.p, args.seed + i)
        t0 = time.perf_counter()
        res = solve(g, SolverConfig(variant=args.variant))
        secs.append(time.perf_counter() - t0)
        nodes.append(res.stats.nodes_expanded)
        leaves = res.leaf_count if res.feasible else "-"
        print(f"seed={args.seed + i:<6} leaves={leaves!s:<3} nodes={nodes[-1]:<8} {secs[-1]:.2f}s")
    print(f"median nodes {statistics.median(nodes):.0f}, max nodes {max(nodes)}, "
          f"median {statistics.median(secs):.2f}s, max {max(secs):.2f}s")


if __name__ == "__main__":
    main()
