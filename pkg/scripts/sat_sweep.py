"""Exhaustive small-formula sweep: grammar route vs brute force."""

from __future__ import annotations

import argparse
import itertools
import json
import time
from dataclasses import asdict, dataclass

from vwccg.sat import brute_force_sat, cnf, solve_via_ccg


@dataclass
class SweepConfig:
    max_vars: int = 3
    max_clauses: int = 3
    max_width: int = 3


def formulas(cfg: SweepConfig):
    for n in range(1, cfg.max_vars + 1):
        lits = [x for v in range(1, n + 1) for x in (v, -v)]
        clauses = [c for w in range(1, cfg.max_width + 1) for c in itertools.combinations(lits, w)]
        for m in range(cfg.max_clauses + 1):
            for cs in itertools.combinations(clauses, m):
                yield cnf(n, cs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vars", type=int, default=3)
    ap.add_argument("--max-clauses", type=int, default=3)
    ap.add_argument("--max-width", type=int, default=3)
    args = ap.parse_args()
    cfg = SweepConfig(args.max_vars, args.max_clauses, args.max_width)

    t0 = time.perf_counter()
    total = sat = disagree = 0
    slowest = 0.0
    for phi in formulas(cfg):
        t = time.perf_counter()
        got = solve_via_ccg(phi)
        slowest = max(slowest, time.perf_counter() - t)
        truth = brute_force_sat(phi) is not None
        total += 1
        sat += truth
        if (got is not None) != truth or (got is not None and not phi.satisfied_by(got)):
            disagree += 1
            print("disagreement:", phi.to_dimacs().replace("\n", " | "))
    summary = dict(config=asdict(cfg), formulas=total, satisfiable=sat, disagreements=disagree,
                   seconds=round(time.perf_counter() - t0, 2), slowest_formula=round(slowest, 4))
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
