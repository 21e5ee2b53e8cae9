"""Command-line front end.

Graph files are plain edge lists: the first non-comment line is ``n m``,
followed by ``m`` lines ``u v`` with 1-indexed vertex ids.  Lines starting
with ``#`` or ``c`` are comments.  Vertex ids are 1-indexed on the command
line and in every report; internally they are 0-indexed.

Exit codes: 0 solved, 2 infeasible, 3 parse error, 4 timeout.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .digraph import DiGraph
from .memo import BudgetExceeded, MemoTable, build_table
from .oracle import DEFAULT_CAP, CapExceeded, solve_all_roots, solve_unconstrained
from .solver import SolverConfig, Timeout, solve, solve_rooted, validate_witness

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_PARSE = 3
EXIT_TIMEOUT = 4


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def _is_comment(line: str) -> bool:
    return line.startswith("#") or line.startswith("c")


def _ints(line: str, lineno: int, what: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(f"expected two integers ({what}), got {len(parts)} fields", lineno)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"non-integer field in {what}", lineno) from None


def parse_graph(text: str) -> DiGraph:
    header = None
    g = None
    seen = set()
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or _is_comment(line):
            continue
        if header is None:
            n, m = _ints(line, lineno, "header 'n m'")
            if n < 1 or m < 0:
                raise ParseError(f"bad header: n={n}, m={m}", lineno)
            header = (n, m)
            g = DiGraph(n)
            continue
        n, m = header
        if len(seen) == m:
            raise ParseError(f"more than the declared {m} arcs", lineno)
        u, v = _ints(line, lineno, "arc 'u v'")
        for x in (u, v):
            if not 1 <= x <= n:
                raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", lineno)
        if (u, v) in seen:
            raise ParseError(f"duplicate arc {u} {v}", lineno)
        seen.add((u, v))
        g.add_arc(u - 1, v - 1)
    if header is None:
        raise ParseError("missing header 'n m'", lineno + 1)
    if len(seen) != header[1]:
        raise ParseError(f"declared {header[1]} arcs, found {len(seen)}", lineno + 1)
    return g


def format_graph(g: DiGraph) -> str:
    lines = [f"{len(g)} {g.num_arcs}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.arcs()]
    return "\n".join(lines) + "\n"


def generate_random(n: int, p: float, seed: int) -> DiGraph:
    """G(n, p) digraph from Python's Mersenne Twister (``random.Random(seed)``).

    One draw per ordered pair, u-major then v, skipping u == v; the arc is
    kept when the draw is below ``p``.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    g = DiGraph(n)
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                g.add_arc(u, v)
    return g


def _random_spec(text: str) -> tuple[int, float, int]:
    try:
        n, p, seed = text.split(",")
        return int(n), float(p), int(seed)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n,p,seed, got {text!r}") from None


def _load(args) -> DiGraph:
    if args.random is not None:
        return generate_random(*args.random)
    if args.input == "-":
        return parse_graph(sys.stdin.read())
    with open(args.input) as fh:
        return parse_graph(fh.read())


# -- reports ------------------------------------------------------------------

def _finite(x):
    return x if x is not None and math.isfinite(x) else None


def solve_report(g: DiGraph, res, cfg: SolverConfig, seconds: float) -> dict:
    st = res.stats
    report = {
        "variant": cfg.variant,
        "n": len(g),
        "m": g.num_arcs,
        "feasible": res.feasible,
        "root": None if res.root is None else res.root + 1,
        "leafCount": res.leaf_count if res.feasible else None,
        "tree": sorted([u + 1, v + 1] for u, v in res.tree),
        "nodesExpanded": st.nodes_expanded,
        "maxDepth": st.max_depth,
        "cases": dict(sorted(st.branch_cases.items())),
        "reductions": dict(sorted(st.reductions.items())),
        "memoLookups": st.memo_lookups,
        "maxBranchingNumber": _finite(st.max_branching_number) if cfg.audit else None,
        "seconds": round(seconds, 6),
    }
    if cfg.audit:
        report["audit"] = {
            "nodes": len(st.audits),
            "claimViolations": sum(1 for a in st.audits if a.claim_violations),
            "boundViolations": sum(1 for a in st.audits if a.bound_violated),
            "measureViolations": sum(1 for a in st.audits if a.measure_violated),
        }
    return report


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
        return
    for key, val in report.items():
        if isinstance(val, dict):
            inner = " ".join(f"{k}={v}" for k, v in val.items())
            out.write(f"{key}: {inner}\n")
        elif key == "tree":
            out.write("tree: " + " ".join(f"{u}->{v}" for u, v in val) + "\n")
        else:
            out.write(f"{key}: {'null' if val is None else val}\n")


# -- subcommands ----------------------------------------------------------------

def cmd_solve(args, out) -> int:
    g = _load(args)
    cfg = SolverConfig(variant=args.variant, audit=args.audit, node_limit=args.node_limit,
                       alpha=args.alpha)
    t0 = time.perf_counter()
    try:
        if args.root is not None:
            if not 1 <= args.root <= len(g):
                raise ValueError(f"root {args.root} out of range 1..{len(g)}")
            res = solve_rooted(g, args.root - 1, cfg)
        else:
            res = solve(g, cfg)
    except Timeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    _emit(solve_report(g, res, cfg, time.perf_counter() - t0), args.format, out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_oracle(args, out) -> int:
    g = _load(args)
    try:
        if args.root is not None:
            ok, k = solve_unconstrained(g, args.root - 1, args.cap)
        else:
            ok, k = solve_all_roots(g, args.cap)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {"n": len(g), "m": g.num_arcs, "feasible": ok, "leafCount": k if ok else None}
    _emit(report, args.format, out)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_table(args, out) -> int:
    if args.action == "build":
        g = _load(args)
        try:
            table = build_table(g, args.alpha, args.budget)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(table.dumps())
    else:
        with open(args.file, "rb") as fh:
            table = MemoTable.loads(fh.read())
    filled = sum(1 for e in table.entries.values() if not e.empty)
    report = {"n": len(table.graph), "alpha": table.alpha, "cutoff": table.limit,
              "entries": len(table), "nonEmpty": filled}
    _emit(report, args.format, out)
    return EXIT_OK


def corpus_seeds(seed: int, count: int) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(2 ** 32) for _ in range(count)]


def check_instance(job) -> dict:
    """Solve one random instance (all roots) and compare with the oracle or the other variants."""
    n, p, seed, variants, cap = job
    g = generate_random(n, p, seed)
    counts = {}
    for variant in variants:
        res = solve(g, SolverConfig(variant=variant))
        if res.feasible:
            validate_witness(g, res.root, res.tree)
        counts[variant] = res.leaf_count if res.feasible else None
    if n <= cap:
        ok, k = solve_all_roots(g, cap)
        counts["oracle"] = k if ok else None
    return {"seed": seed, "counts": counts, "agree": len(set(counts.values())) == 1}


def cmd_corpus(args, out) -> int:
    variants = ("branch", "naive", "memo") if args.variants else ("branch",)
    if not args.variants and args.n > args.cap:
        print(f"error: n={args.n} exceeds the oracle cap {args.cap}; use --variants", file=sys.stderr)
        return 1
    jobs = [(args.n, args.p, s, variants, args.cap) for s in corpus_seeds(args.seed, args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(check_instance, jobs))
    else:
        results = [check_instance(j) for j in jobs]
    bad = [r for r in results if not r["agree"]]
    for r in bad:
        out.write(f"mismatch: seed={r['seed']} {r['counts']}\n")
    out.write(f"instances: {len(results)}\n")
    out.write(f"mismatches: {len(bad)}\n")
    return EXIT_OK if not bad else 1


# -- argument parsing -------------------------------------------------------------

def _add_input(p, required=True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--input", metavar="FILE", help="edge-list file ('-' for stdin)")
    src.add_argument("--random", type=_random_spec, metavar="N,P,SEED",
                     help="random digraph G(n, p) with the given seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dmlst", description="Exact maximum-leaf out-branching solver.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one instance")
    _add_input(sp)
    roots = sp.add_mutually_exclusive_group()
    roots.add_argument("--root", type=int, metavar="ID", help="fixed root (1-indexed)")
    roots.add_argument("--all-roots", action="store_true", help="best over every root (default)")
    sp.add_argument("--variant", choices=("branch", "naive", "memo"), default="branch")
    sp.add_argument("--alpha", type=float, default=0.3, help="memo cutover fraction")
    sp.add_argument("--audit", action="store_true", help="record per-node measure audits")
    sp.add_argument("--node-limit", type=int, default=None)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_solve)

    op = sub.add_parser("oracle", help="brute-force optimum (small n only)")
    _add_input(op)
    roots = op.add_mutually_exclusive_group()
    roots.add_argument("--root", type=int, metavar="ID")
    roots.add_argument("--all-roots", action="store_true")
    op.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n accepted")
    op.add_argument("--format", choices=("text", "json"), default="text")
    op.set_defaults(func=cmd_oracle)

    tp = sub.add_parser("table", help="build, dump or inspect a memo table")
    tsub = tp.add_subparsers(dest="action", required=True)
    tb = tsub.add_parser("build")
    _add_input(tb)
    tb.add_argument("--alpha", type=float, default=0.3)
    tb.add_argument("--budget", type=int, default=200_000, help="maximum number of keys")
    tb.add_argument("--out", metavar="FILE", help="write the table here")
    tb.add_argument("--format", choices=("text", "json"), default="text")
    ti = tsub.add_parser("info")
    ti.add_argument("file")
    ti.add_argument("--format", choices=("text", "json"), default="text")
    tp.set_defaults(func=cmd_table)

    cp = sub.add_parser("corpus", help="batch equivalence run on random instances")
    cp.add_argument("--n", type=int, required=True)
    cp.add_argument("--count", type=int, default=100)
    cp.add_argument("--p", type=float, default=0.3)
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    cp.add_argument("--variants", action="store_true",
                    help="also compare the naive and memo variants")
    cp.add_argument("--jobs", type=int, default=1)
    cp.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
