"""Grammar size of the SAT reduction over a doubling family of formulas."""

from __future__ import annotations

import argparse
import math

from vwccg.grammar import grammar_size
from vwccg.sat import build_sat_instance, cnf


def family(steps: int, width: int = 3):
    m = 2
    for _ in range(steps):
        n = max(m, width)
        yield cnf(n, [[(i + k) % n + 1 if k % 2 == 0 else -((i + k) % n + 1) for k in range(width)] for i in range(m)])
        m *= 2


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=6)
    args = ap.parse_args()

    print(f"{'|phi|':>6} {'n':>4} {'m':>4} {'rules':>6} {'part2':>6} {'size':>8} {'size/|phi|^2':>13} {'slope':>6}")
    prev = None
    for phi in family(args.steps):
        inst = build_sat_instance(phi)
        size = grammar_size(inst.grammar)
        s = phi.size
        slope = "" if prev is None else f"{math.log(size / prev[1]) / math.log(s / prev[0]):.2f}"
        print(f"{s:>6} {phi.num_vars:>4} {len(phi.clauses):>4} {len(inst.grammar.rules):>6} "
              f"{inst.part2_rules:>6} {size:>8} {size / s**2:>13.3f} {slope:>6}")
        prev = (s, size)


if __name__ == "__main__":
    main()
