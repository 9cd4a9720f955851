"""CNF-SAT to epsilon-free grammar recognition.

The input string is ``c_m ... c_1 c_0 v_1 ... v_n v_{n+1} d_n ... d_1``. A
derivation first guesses one category per variable (``cent/v{j}T/cent`` or
``cent/v{j}F/cent``) and stacks them onto ``c0``, then passes the stacked
assignment from clause to clause through degree-n compositions that only fire
when the clause is satisfied, and finally pops the assignment with the ``d``
tokens until the bare start category ``c{m}`` remains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .category import FWD, Category, atom
from .derivation import Tree, check_derivation, leaves, tree_yield
from .grammar import Grammar, LexEntry, Rule, grammar_size, make_grammar
from .parser import ParseConfig, parse

CENT = "cent"


class DimacsError(ValueError):
    pass


class Literal(NamedTuple):
    var: int
    negated: bool = False

    def __str__(self) -> str:
        return f"-{self.var}" if self.negated else str(self.var)

    def holds(self, assignment: dict[int, bool]) -> bool:
        return assignment[self.var] != self.negated


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self):
        for c in self.clauses:
            for lit in c:
                if not 1 <= lit.var <= self.num_vars:
                    raise DimacsError(f"variable {lit.var} out of range 1..{self.num_vars}")

    @property
    def size(self) -> int:
        """Total number of literal occurrences."""
        return sum(len(c) for c in self.clauses)

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(lit.holds(assignment) for lit in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def cnf(num_vars: int, clauses: Sequence[Sequence[int]]) -> CnfFormula:
    """Build a formula from DIMACS-style signed integers."""
    return CnfFormula(num_vars, tuple(tuple(Literal(abs(x), x < 0) for x in c) for c in clauses))


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    ints: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: bad header {line!r}") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        try:
            ints.extend(int(x) for x in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token in {line!r}") from None
    if header is None:
        raise DimacsError("missing 'p cnf n m' header")
    n, m = header
    clauses: list[list[int]] = []
    current: list[int] = []
    for x in ints:
        if x == 0:
            if not current:
                raise DimacsError("zero-length clause")
            clauses.append(current)
            current = []
        else:
            if abs(x) > n:
                raise DimacsError(f"variable {abs(x)} out of range 1..{n}")
            current.append(x)
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != m:
        raise DimacsError(f"header declares {m} clauses, found {len(clauses)}")
    return cnf(n, clauses)


# -- the construction ---------------------------------------------------------


def _vt(j: int) -> str:
    return f"v{j}T"


def _vf(j: int) -> str:
    return f"v{j}F"


def _value_atom(j: int, value: bool) -> str:
    return _vt(j) if value else _vf(j)


@dataclass(frozen=True)
class SatInstance:
    grammar: Grammar
    input: tuple[str, ...]
    arity_bound: int
    n: int
    m: int
    part2_rules: int = 0
    formula: CnfFormula | None = field(default=None, compare=False)

    def report(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "size_phi": self.formula.size if self.formula else None,
            "rules": len(self.grammar.rules),
            "part2_rules": self.part2_rules,
            "lexicon": len(self.grammar.lexicon),
            "grammar_size": grammar_size(self.grammar),
            "input_length": len(self.input),
            "arity_bound": self.arity_bound,
        }


def _fwd(degree: int = 0, y=None, zs=None) -> Rule:
    return Rule(
        FWD,
        degree,
        (FWD,) * degree,
        None,
        frozenset(atom(a) for a in y) if y else None,
        tuple(frozenset([atom(z)]) if z else None for z in (zs or [None] * degree)),
    )


def build_sat_instance(phi: CnfFormula) -> SatInstance:
    n, m = phi.num_vars, len(phi.clauses)
    if any(len(c) == 0 for c in phi.clauses):
        raise ValueError("formula contains an empty clause")
    cent = atom(CENT)

    lexicon = [LexEntry("c0", Category("c0", [(FWD, cent)]))]
    for j in range(1, n + 1):
        for a in (_vt(j), _vf(j)):
            lexicon.append(LexEntry(f"v{j}", Category(CENT, [(FWD, atom(a)), (FWD, cent)])))
    lexicon.append(LexEntry(f"v{n + 1}", cent))
    for i in range(1, m + 1):
        lexicon.append(LexEntry(f"c{i}", Category(f"c{i}", [(FWD, atom(f"c{i - 1}"))])))
    for j in range(1, n + 1):
        lexicon += [LexEntry(f"d{j}", atom(_vt(j))), LexEntry(f"d{j}", atom(_vf(j)))]

    rules: list[Rule] = []
    # guessing: push v_j's value under the cent marker, then drop the marker
    for j in range(1, n + 1):
        rules.append(_fwd(2, [CENT], [_vt(j), CENT]))
        rules.append(_fwd(2, [CENT], [_vf(j), CENT]))
    rules.append(_fwd(0, [CENT]))
    # verification: pass the assignment to clause i when some literal agrees
    part2 = 0
    for i, clause in enumerate(phi.clauses, 1):
        seen = set()
        for lit in clause:
            if lit in seen:
                continue
            seen.add(lit)
            zs = [None] * n
            zs[lit.var - 1] = _value_atom(lit.var, not lit.negated)
            rules.append(_fwd(n, [f"c{i - 1}"], zs))
            part2 += 1
    # finalisation: consume the assignment with the d tokens
    for j in range(1, n + 1):
        rules.append(_fwd(0, [_vt(j)]))
        rules.append(_fwd(0, [_vf(j)]))

    words = [f"c{i}" for i in range(m, -1, -1)]
    words += [f"v{j}" for j in range(1, n + 2)]
    words += [f"d{j}" for j in range(n, 0, -1)]
    g = make_grammar(lexicon, rules, f"c{m}")
    return SatInstance(g, tuple(words), n + 2, n, m, part2, phi)


def decode_assignment(inst: SatInstance, t: Tree) -> dict[int, bool]:
    """Read the guessed truth values off the ``v_j`` leaves."""
    if tree_yield(t) != list(inst.input):
        raise ValueError("derivation yield differs from the instance input")
    bad = check_derivation(inst.grammar, t)
    if bad is not None:
        raise ValueError(f"not a derivation of the instance grammar: {bad}")
    found: dict[int, bool] = {}
    for leaf in leaves(t):
        word = leaf.entry.word
        if word is None or not word.startswith("v"):
            continue
        j = int(word[1:])
        if j > inst.n:
            continue
        c = leaf.entry.category
        value_atom = c.args[0].category.target if c.arity == 2 else None
        if value_atom == _vt(j):
            found[j] = True
        elif value_atom == _vf(j):
            found[j] = False
        else:
            raise ValueError(f"unexpected category {c} for v{j}")
    missing = [j for j in range(1, inst.n + 1) if j not in found]
    if missing:
        raise ValueError(f"no leaf for variables {missing}")
    return found


def brute_force_sat(phi: CnfFormula) -> dict[int, bool] | None:
    """First satisfying assignment in lexicographic order (False < True, v1 first)."""
    if phi.num_vars > 20:
        raise ValueError("brute force is limited to 20 variables")
    for values in itertools.product((False, True), repeat=phi.num_vars):
        a = {j: v for j, v in enumerate(values, 1)}
        if phi.satisfied_by(a):
            return a
    return None


def solve_via_ccg(phi: CnfFormula, max_items: int | None = None) -> dict[int, bool] | None:
    if any(len(c) == 0 for c in phi.clauses):
        return None
    inst = build_sat_instance(phi)
    res = parse(inst.grammar, inst.input, ParseConfig(arity_cap=inst.arity_bound, max_items=max_items))
    if not res.accepted:
        return None
    return decode_assignment(inst, res.derivation)
