from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from vwccg.derivation import Leaf, check_derivation
from vwccg.fixtures import data_text
from vwccg.grammar import LexEntry, is_epsilon_free
from vwccg.category import atom
from vwccg.parser import ParseConfig, parse
from vwccg.sat import (
    DimacsError,
    Literal,
    brute_force_sat,
    build_sat_instance,
    cnf,
    decode_assignment,
    parse_dimacs,
    solve_via_ccg,
)

RUNNING = cnf(2, [[1, -2], [1, 2], [-1, -2]])


def test_parse_running_example():
    assert parse_dimacs(data_text("running.cnf")) == RUNNING
    assert parse_dimacs("p cnf 2 3\n1 -2 0\n1 2 0\n-1 -2 0\n") == RUNNING


def test_parse_small_and_duplicates():
    phi = parse_dimacs("p cnf 1 1\n1 0\n")
    assert phi.num_vars == 1 and phi.clauses == ((Literal(1),),)
    dup = parse_dimacs("p cnf 1 1\n1 1 0\n")
    assert dup.clauses == ((Literal(1), Literal(1)),)
    assert build_sat_instance(dup).part2_rules == 1


@pytest.mark.parametrize(
    "text",
    [
        "1 0\n",
        "p cnf 2 1\n3 0\n",
        "p cnf 2 2\n1 0\n",
        "p cnf 2 1\n0\n",
        "p cnf 2 1\n1 2\n",
        "p cnf x 1\n1 0\n",
        "p cnf 2 1\n1 a 0\n",
        "",
    ],
)
def test_dimacs_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_running_example_instance():
    inst = build_sat_instance(RUNNING)
    assert inst.input == ("c3", "c2", "c1", "c0", "v1", "v2", "v3", "d2", "d1")
    assert inst.part2_rules == 6
    assert inst.arity_bound == 4
    assert is_epsilon_free(inst.grammar)


def test_single_literal_instance():
    inst = build_sat_instance(cnf(1, [[1]]))
    assert inst.input == ("c1", "c0", "v1", "v2", "d1")
    res = parse(inst.grammar, inst.input, ParseConfig(arity_cap=inst.arity_bound))
    assert decode_assignment(inst, res.derivation) == {1: True}


def test_running_example_solution():
    assert solve_via_ccg(RUNNING) == {1: True, 2: False}


def test_contradiction_and_empty_clause():
    assert solve_via_ccg(cnf(1, [[1], [-1]])) is None
    assert brute_force_sat(cnf(1, [[1], [-1]])) is None
    empty = cnf(1, [[1], []])
    with pytest.raises(ValueError):
        build_sat_instance(empty)
    assert solve_via_ccg(empty) is None


def test_no_clauses():
    phi = cnf(2, [])
    inst = build_sat_instance(phi)
    assert inst.grammar.start == "c0"
    assert solve_via_ccg(phi) is not None


def test_brute_force_order():
    assert brute_force_sat(cnf(2, [[1, 2]])) == {1: False, 2: True}
    assert brute_force_sat(RUNNING) == {1: True, 2: False}


def test_decode_rejects_wrong_yield():
    inst = build_sat_instance(RUNNING)
    with pytest.raises(ValueError):
        decode_assignment(inst, Leaf(LexEntry("c0", atom("c0"))))


def test_parser_derivation_checks():
    inst = build_sat_instance(RUNNING)
    res = parse(inst.grammar, inst.input, ParseConfig(arity_cap=inst.arity_bound))
    assert check_derivation(inst.grammar, res.derivation, expected_yield=inst.input, require_start=True) is None


def _all_formulas(n, m, width):
    lits = [v for j in range(1, n + 1) for v in (j, -j)]
    clauses = [c for k in range(1, width + 1) for c in itertools.combinations(lits, k)]
    for k in range(m + 1):
        for cs in itertools.combinations(clauses, k):
            yield cnf(n, cs)


def test_two_variable_two_clause_sweep():
    for phi in _all_formulas(2, 2, 2):
        got = solve_via_ccg(phi)
        assert (got is None) == (brute_force_sat(phi) is None)
        if got is not None:
            assert phi.satisfied_by(got)


clause = st.lists(st.integers(1, 4).flatmap(lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.lists(clause, max_size=4))
def test_random_formulas(clauses):
    phi = cnf(4, clauses)
    inst = build_sat_instance(phi)
    assert len(inst.input) == len(clauses) + 2 * 4 + 2
    assert is_epsilon_free(inst.grammar)
    assert inst.part2_rules <= phi.size
    got = solve_via_ccg(phi)
    assert (got is None) == (brute_force_sat(phi) is None)
    if got is not None:
        assert phi.satisfied_by(got)
