"""Machine-pool sweep: simulator vs emptiness of the reduced grammar."""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter

from vwccg.atm import accepts
from vwccg.atm_pool import PoolConfig, pool_cases
from vwccg.atm_reduction import DecodeError, build_atm_instance, canonical_derivation, decode_computation, solve_empty


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=PoolConfig.seed)
    ap.add_argument("--machines", type=int, default=PoolConfig.random_machines)
    ap.add_argument("--max-cells", type=int, default=PoolConfig.max_cells)
    args = ap.parse_args()
    cfg = PoolConfig(seed=args.seed, random_machines=args.machines, max_cells=args.max_cells)

    t0 = time.perf_counter()
    stats = Counter()
    max_arity = 0
    for name, mach, w in pool_cases(cfg):
        truth = accepts(mach, w)
        inst = build_atm_instance(mach, w)
        res = solve_empty(inst)
        stats["cases"] += 1
        stats["accepting"] += truth
        stats["disagreements"] += truth != res.accepted
        stats["cap_hit"] += res.cap_hit
        max_arity = max(max_arity, max(it.category.arity for it in res.chart.items))
        if res.accepted:
            try:
                decode_computation(inst, res.derivation)
            except DecodeError:
                stats["first_derivation_not_canonical"] += 1
            decode_computation(inst, canonical_derivation(inst))
            stats["decoded"] += 1
        if truth != res.accepted:
            print("disagreement:", name, repr(w))
    out = dict(stats, max_chart_arity=max_arity, seconds=round(time.perf_counter() - t0, 2))
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
