#!/usr/bin/env python3
"""Timing sweep: run the article rules over the six contract scenarios and
report per-contract wall-clock times plus the union-graph result.

Usage: python3 scripts/run_sweep.py [--repeat N] [--rules R-4-1,R-8-6,...]
"""

from __future__ import annotations

import argparse
import statistics
import time

from daont_verify.corpus import CONTRACT_FIXTURES, load_fixture
from daont_verify.rdf import merge
from daont_verify.rules import ARTICLE_RULE_IDS, check, rules_by_id


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20,
                        help="timing repetitions per contract (default 20)")
    parser.add_argument("--rules", default=",".join(ARTICLE_RULE_IDS))
    args = parser.parse_args()

    by_id = rules_by_id()
    rules = [by_id[rid.strip()] for rid in args.rules.split(",") if rid.strip()]
    graphs = {name: load_fixture(name) for name in CONTRACT_FIXTURES}

    check(graphs[CONTRACT_FIXTURES[0]], rules)  # warm the parse cache

    print(f"{'contract':<16} {'triples':>7} {'violations':>10} "
          f"{'median ms':>10} {'max ms':>8}")
    total_violations = 0
    for name, graph in graphs.items():
        times = []
        for _ in range(args.repeat):
            started = time.perf_counter()
            report = check(graph, rules, graph_id=name)
            times.append((time.perf_counter() - started) * 1000)
        total_violations += len(report.violations)
        print(f"{name:<16} {len(graph):>7} {len(report.violations):>10} "
              f"{statistics.median(times):>10.3f} {max(times):>8.3f}")

    union = merge(*graphs.values())
    started = time.perf_counter()
    union_report = check(union, rules, graph_id="union")
    union_ms = (time.perf_counter() - started) * 1000
    print(f"{'union':<16} {len(union):>7} {len(union_report.violations):>10} "
          f"{union_ms:>10.3f}")
    print(f"\ntotal violations across contracts: {total_violations}")


if __name__ == "__main__":
    main()
