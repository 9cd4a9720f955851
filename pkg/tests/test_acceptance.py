"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for the summary alone.
"""

from __future__ import annotations

import itertools
import math
import sys
import time

import pytest

from vwccg.atm import acceptance_levels, accepts, computations_up_to
from vwccg.atm_pool import pool_cases
from vwccg.atm_reduction import (
    DecodeError,
    build_atm_instance,
    canonical_derivation,
    decode_computation,
    solve_empty,
)
from vwccg.category import FWD, Category
from vwccg.derivation import Leaf, Node, check_derivation, derives_by_enumeration, iter_nodes
from vwccg.fixtures import load_fixture
from vwccg.grammar import LexEntry, grammar_size, grammar_stats
from vwccg.parser import ParseConfig, parse, recognize
from vwccg.sat import brute_force_sat, build_sat_instance, cnf, solve_via_ccg

RESULTS: dict[str, tuple[bool, str]] = {}


def report(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = (ok, detail)
    line = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}"
    capman = getattr(report, "capman", None)
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print("\n" + line)
    else:
        print(line)
    sys.stdout.flush()


@pytest.fixture(autouse=True)
def _uncaptured(request):
    report.capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    report.capman = None


# -- 1: running example --------------------------------------------------------


def criterion_1():
    phi = cnf(2, [[1, -2], [1, 2], [-1, -2]])
    t0 = time.perf_counter()
    got = solve_via_ccg(phi)
    elapsed = time.perf_counter() - t0
    inst = build_sat_instance(phi)
    expected_input = ("c3", "c2", "c1", "c0", "v1", "v2", "v3", "d2", "d1")
    ok = got == {1: True, 2: False} and inst.input == expected_input and elapsed < 1.0
    return ok, f"assignment={got} input={' '.join(inst.input)} time={elapsed:.3f}s (<1s)"


# -- 2: exhaustive SAT sweep ---------------------------------------------------


def small_formulas(max_vars=3, max_clauses=3, max_width=3):
    """Every CNF as a set of distinct clauses, each a set of distinct literals."""
    for n in range(1, max_vars + 1):
        lits = [x for v in range(1, n + 1) for x in (v, -v)]
        clauses = [c for w in range(1, max_width + 1) for c in itertools.combinations(lits, w)]
        for m in range(max_clauses + 1):
            for cs in itertools.combinations(clauses, m):
                yield cnf(n, cs)


def criterion_2():
    t0 = time.perf_counter()
    total = agree = bad_models = 0
    for phi in small_formulas():
        total += 1
        got = solve_via_ccg(phi)
        truth = brute_force_sat(phi) is not None
        agree += (got is not None) == truth
        if got is not None and not phi.satisfied_by(got):
            bad_models += 1
    elapsed = time.perf_counter() - t0
    ok = agree == total and bad_models == 0 and elapsed < 600
    return ok, f"{agree}/{total} formulas agree, {bad_models} bad assignments, {elapsed:.1f}s (<600s)"


# -- 3: size law ---------------------------------------------------------------


def size_family():
    """Width-3 formulas with |phi| = 6, 12, 24, 48, 96 and as many variables as clauses."""
    out = []
    for m in (2, 4, 8, 16, 32):
        n = max(m, 3)
        clauses = [[i % n + 1, -((i + 1) % n + 1), (i + 2) % n + 1] for i in range(m)]
        out.append(cnf(n, clauses))
    return out


def criterion_3():
    rows = []
    for phi in size_family():
        inst = build_sat_instance(phi)
        rows.append((phi.size, grammar_size(inst.grammar), inst.part2_rules))
    c = rows[0][1] / rows[0][0] ** 2
    fits = all(size <= c * s * s for s, size, _ in rows)
    part2 = all(p2 <= s for s, _, p2 in rows)
    slope = math.log(rows[-1][1] / rows[-2][1]) / math.log(rows[-1][0] / rows[-2][0])
    ok = fits and part2 and [r[0] for r in rows] == [6, 12, 24, 48, 96]
    sizes = ", ".join(f"|phi|={s}:{size}" for s, size, _ in rows)
    return ok, f"C={c:.2f} from the smallest instance; {sizes}; last log-log slope {slope:.2f}; part-2 rules <= |phi|: {part2}"


# -- 4: rule restrictions ------------------------------------------------------


def criterion_4():
    good = "Kahn blocked skillfully a powerful shot by Rivaldo".split()
    starred = "Kahn blocked skillfully a powerful by Rivaldo shot".split()
    free, restricted = load_fixture("rivaldo_free"), load_fixture("rivaldo_restricted")
    v = {
        "free/good": recognize(free, good).accepted,
        "free/starred": recognize(free, starred).accepted,
        "restricted/good": recognize(restricted, good).accepted,
        "restricted/starred": recognize(restricted, starred).accepted,
    }
    ok = v == {"free/good": True, "free/starred": True, "restricted/good": True, "restricted/starred": False}
    return ok, ", ".join(f"{k}={'ACCEPT' if x else 'REJECT'}" for k, x in v.items())


# -- 5: empty-string fixture ----------------------------------------------------


def criterion_5():
    g = load_fixture("ab_eps")
    members = ["", "ab", "aabb", "aaabbb", "abab", "ababab"]
    missing = [w for w in members if not recognize(g, list(w)).accepted]
    disagree = []
    checked = 0
    for n in range(5):
        for w in itertools.product("ab", repeat=n):
            checked += 1
            # every word needs at most one empty-string entry beside it, plus the start entry
            if recognize(g, w).accepted != derives_by_enumeration(g, w, 4 * n + 5):
                disagree.append("".join(w))
    ok = not missing and not disagree
    return ok, f"members missing: {missing or 'none'}; {checked - len(disagree)}/{checked} strings agree with enumeration"


# -- 6 and 7: machine pool ------------------------------------------------------

_POOL: dict = {}


def run_pool():
    if _POOL:
        return _POOL
    t0 = time.perf_counter()
    rows = []
    for name, mach, w in pool_cases():
        truth = accepts(mach, w)
        inst = build_atm_instance(mach, w)
        res = solve_empty(inst)
        rows.append((name, mach, w, truth, inst, res))
    _POOL.update(rows=rows, elapsed=time.perf_counter() - t0)
    return _POOL


def criterion_6a():
    pool = run_pool()
    rows = pool["rows"]
    wrong = [(n, w) for n, _, w, truth, _, res in rows if truth != res.accepted]
    accepted = sum(r[3] for r in rows)
    ok = not wrong and pool["elapsed"] < 1800
    return ok, (
        f"{len(rows) - len(wrong)}/{len(rows)} cases agree ({accepted} accepting), "
        f"{len({r[0] for r in rows})} machines, {pool['elapsed']:.1f}s (<1800s)"
    )


def criterion_6b():
    rows = run_pool()["rows"]
    hits = [r for r in rows if r[5].cap_hit]
    ok = not hits
    return ok, f"cap_hit in {len(hits)}/{len(rows)} cases at cap 2m+2"


def criterion_7():
    rows = run_pool()["rows"]
    checked = failures = first_tree_failures = 0
    for name, mach, w, truth, inst, res in rows:
        if not res.accepted:
            continue
        checked += 1
        try:
            decode_computation(inst, res.derivation)
        except DecodeError:
            first_tree_failures += 1
        t = canonical_derivation(inst)
        if t is None:
            failures += 1
            continue
        try:
            comp = decode_computation(inst, t)
        except DecodeError:
            failures += 1
            continue
        acc = acceptance_levels(mach, w)
        depth = acc.level[acc.root]
        target = comp.config_multiset()
        if not any(c.config_multiset() == target for c in computations_up_to(mach, acc.root, depth)):
            failures += 1
    ok = failures == 0 and checked > 0
    return ok, (
        f"{checked - failures}/{checked} decoded computations valid and minimal-depth matched "
        f"(first extracted derivation non-canonical in {first_tree_failures})"
    )


# -- 8: certificate checker -----------------------------------------------------


def certificate_pool():
    """(grammar, input, derivation) triples emitted by the parser."""
    out = []

    def add(g, w, cap=None):
        res = parse(g, w, ParseConfig(arity_cap=cap))
        if res.accepted:
            out.append((g, tuple(w), res.derivation))

    add(load_fixture("theorems"), "We prove two theorems".split())
    for name in ("rivaldo_free", "rivaldo_restricted"):
        add(load_fixture(name), "Kahn blocked skillfully a powerful shot by Rivaldo".split())
        add(load_fixture(name), "Kahn blocked skillfully a powerful by Rivaldo shot".split())
    g = load_fixture("ab_eps")
    for n in range(7):
        for w in itertools.product("ab", repeat=n):
            add(g, w)
    for name in ("mixed", "compose"):
        g = load_fixture(name)
        for n in range(1, 5):
            for w in itertools.product(sorted(g.vocabulary), repeat=n):
                add(g, w)
    for phi in [cnf(2, [[1, -2], [1, 2], [-1, -2]]), cnf(3, [[1, 2, 3], [-1, -2], [2, -3]]), cnf(1, [[1]])]:
        inst = build_sat_instance(phi)
        add(inst.grammar, inst.input, inst.arity_bound)
    for name, mach, w, truth, inst, res in run_pool()["rows"][:200]:
        if res.accepted:
            out.append((inst.grammar, (), res.derivation))
    return out


def _replace(t, path, new):
    if not path:
        return new
    if path[0] == 0:
        return Node(t.category, t.rule, _replace(t.left, path[1:], new), t.right)
    return Node(t.category, t.rule, t.left, _replace(t.right, path[1:], new))


def _other_categories(c: Category):
    yield Category("Zz" if c.target != "Zz" else "Zy", c.args)
    yield Category(c.target, c.args + ((FWD, Category("Zz")),))


def mutations(g, t):
    vocab = sorted(g.vocabulary) or ["zz"]
    for path, n in iter_nodes(t):
        if isinstance(n, Leaf):
            for c in _other_categories(n.entry.category):
                yield "category", _replace(t, path, Leaf(LexEntry(n.entry.word, c)))
            others = [x for x in vocab if x != n.entry.word]
            word = others[0] if others else "zz"
            yield "word", _replace(t, path, Leaf(LexEntry(word, n.entry.category)))
        else:
            for c in _other_categories(n.category):
                yield "category", _replace(t, path, Node(c, n.rule, n.left, n.right))
            r = g.rules[n.rule]
            ids = [-1, len(g.rules)] + [
                k for k, s in enumerate(g.rules) if (s.schema, s.degree) != (r.schema, r.degree)
            ]
            for k in ids:
                yield "rule", _replace(t, path, Node(n.category, k, n.left, n.right))


def criterion_8():
    pool = certificate_pool()
    valid = sum(check_derivation(g, t, expected_yield=w, require_start=True) is None for g, w, t in pool)
    counts = {"category": [0, 0], "rule": [0, 0], "word": [0, 0]}
    for g, w, t in pool:
        for kind, bad in mutations(g, t):
            counts[kind][0] += 1
            counts[kind][1] += check_derivation(g, bad, expected_yield=w, require_start=True) is not None
    ok = valid == len(pool) and all(total == caught for total, caught in counts.values())
    detail = ", ".join(f"{k} {caught}/{total} caught" for k, (total, caught) in counts.items())
    return ok, f"{valid}/{len(pool)} parser derivations pass; mutations: {detail}"


# -- 9: parser exactness ----------------------------------------------------------


def eps_free_pool():
    pool = [(n, load_fixture(n)) for n in ("theorems", "rivaldo_free", "rivaldo_restricted", "mixed", "compose")]
    pool.append(("sat_v1", build_sat_instance(cnf(1, [[1]])).grammar))
    return pool


def criterion_9():
    strings = disagree = invariant_breaks = 0
    for name, g in eps_free_pool():
        st = grammar_stats(g)
        lex_args = {a for e in g.lexicon for a in e.category.args}
        vocab = sorted(g.vocabulary)
        for n in range(6):
            for w in itertools.product(vocab, repeat=n):
                strings += 1
                res = recognize(g, w)
                if res.accepted != derives_by_enumeration(g, w, max(2 * n - 1, 1)):
                    disagree += 1
                if n == 0:
                    continue
                arity_bound = st.gamma + st.dmax * (n - 1)
                size_bound = 1 + st.alpha * arity_bound
                for item in res.chart.items:
                    c = item.category
                    if c.arity > arity_bound or c.size() > size_bound or not set(c.args) <= lex_args:
                        invariant_breaks += 1
    ok = disagree == 0 and invariant_breaks == 0
    return ok, f"{len(eps_free_pool())} grammars, {strings} strings, {disagree} disagreements, {invariant_breaks} invariant violations"


CRITERIA = {
    "1": criterion_1,
    "2": criterion_2,
    "3": criterion_3,
    "4": criterion_4,
    "5": criterion_5,
    "6a": criterion_6a,
    "6b": criterion_6b,
    "7": criterion_7,
    "8": criterion_8,
    "9": criterion_9,
}


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key):
    ok, detail = CRITERIA[key]()
    report(key, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for key, fn in CRITERIA.items():
        ok, detail = fn()
        report(key, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
