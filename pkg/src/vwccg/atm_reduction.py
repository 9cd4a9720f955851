"""Alternating machine acceptance to emptiness membership.

``build_atm_instance(M, w)`` produces a grammar with only empty-string
lexicon entries whose start category ``init`` derives the empty string
exactly when ``M`` accepts ``w``. A configuration ``(q, a1 .. am)`` is
encoded as ``q_q/s_a1/.../s_am`` with the first tape cell innermost; each
node of an accepting computation becomes one derivation fragment built
around such a category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .atm import (
    BLANK,
    ComputationTree,
    Config,
    Machine,
    MachineError,
    StateType,
    initial_config,
    validate_computation,
)
from .category import FWD, Category, atom
from .derivation import Leaf, Node, Tree, check_derivation, top, tree_yield
from .grammar import Grammar, LexEntry, Rule, make_grammar
from .parser import ParseConfig, ParseResult, parse

INIT, ACCEPT, CENT = "init", "accept", "cent"


class DecodeError(ValueError):
    pass


def state_atom(q: str) -> str:
    return f"q_{q}"


def symbol_atom(a: str) -> str:
    return "s__" if a == BLANK else f"s_{a}"


def trans_atom(k: int) -> str:
    return f"t_{k}"


@dataclass(frozen=True)
class UniversalPair:
    index: int
    state: str
    symbol: str
    t1: int
    t2: int


@dataclass
class AtmInstance:
    grammar: Grammar
    arity_bound: int
    m: int
    machine: Machine
    input: tuple[str, ...]
    pairs: tuple[UniversalPair, ...] = ()
    registry: dict = field(default_factory=dict)

    def sidecar(self) -> str:
        doc = {"m": self.m, "arity_bound": self.arity_bound, "input": list(self.input), "registry": self.registry}
        return json.dumps(doc, indent=2, sort_keys=True)


def _fwd(degree: int, target=None, y=None, zs=None) -> Rule:
    zs = zs or [None] * degree
    return Rule(
        FWD,
        degree,
        (FWD,) * degree,
        frozenset(target) if target else None,
        frozenset(atom(a) for a in y) if y else None,
        tuple(frozenset([atom(z)]) if z else None for z in zs),
    )


def _fcat(target: str, *args: str) -> Category:
    return Category(target, [(FWD, atom(a)) for a in args])


def universal_pairs(m: Machine) -> list[UniversalPair]:
    pairs = []
    seen = set()
    for k, t in enumerate(m.transitions):
        if m.states[t.state] is not StateType.U or (t.state, t.read) in seen:
            continue
        seen.add((t.state, t.read))
        ks = m.outgoing(t.state, t.read)
        if len(ks) != 2:
            raise MachineError(f"universal ({t.state},{t.read}) has {len(ks)} transitions; the reduction needs exactly two")
        pairs.append(UniversalPair(len(pairs), t.state, t.read, ks[0], ks[1]))
    for q, kind in m.states.items():
        if kind is StateType.U:
            for a in m.alphabet:
                if not m.outgoing(q, a):
                    raise MachineError(f"universal ({q},{a}) has no transitions; the reduction needs exactly two")
    return pairs


def build_atm_instance(mach: Machine, w: Sequence[str]) -> AtmInstance:
    c0 = initial_config(mach, w)
    m = len(c0.tape)
    pairs = universal_pairs(mach)
    sym = [symbol_atom(a) for a in mach.alphabet]
    lex: list[Category] = []
    rules: list[Rule] = []

    # initial configuration: init/q0 then pop the tape symbols one by one
    lex.append(_fcat(INIT, state_atom(mach.start)))
    lex += [atom(s) for s in sym]
    for s in sym:
        rules.append(_fwd(0, [INIT], [s]))
    rules.append(_fwd(m, [INIT], [state_atom(mach.start)], [symbol_atom(a) for a in c0.tape]))

    # accepting configurations: switch to accept and empty the stack
    accepting = [q for q, k in mach.states.items() if k is StateType.A]
    for q in accepting:
        lex.append(_fcat(state_atom(q), ACCEPT))
    if accepting:
        lex.append(_fcat(ACCEPT, CENT))
        lex += [_fcat(CENT, s, CENT) for s in sym]
        lex.append(atom(CENT))
        for q in accepting:
            rules.append(_fwd(m, [state_atom(q)], [ACCEPT]))
        rules.append(_fwd(0, [ACCEPT], [CENT]))
        for s in sym:
            rules.append(_fwd(2, [ACCEPT], [CENT], [s, CENT]))

    # every transition that can be simulated: t/a/q' plus the two seam rules
    used = set()
    for k, t in enumerate(mach.transitions):
        if mach.states[t.state] is StateType.E:
            lex.append(_fcat(state_atom(t.state), trans_atom(k)))
            rules.append(_fwd(m, [state_atom(t.state)], [trans_atom(k)]))
            used.add(k)
    for p in pairs:
        used |= {p.t1, p.t2}
    for k in sorted(used):
        t = mach.transitions[k]
        lex.append(_fcat(trans_atom(k), symbol_atom(t.read), state_atom(t.next_state)))
        rules.append(_fwd(0, [trans_atom(k)], [symbol_atom(t.write)]))
        rules.append(_fwd(m, [trans_atom(k)], [state_atom(t.next_state)]))

    # universal configurations: copy the stack, check the copy, split it
    for p in pairs:
        qa, minus, plus = state_atom(p.state), f"pi{p.index}m", f"pi{p.index}p"
        eq = [f"pi{p.index}eq{i}" for i in range(1, m + 1)]
        t1, t2 = trans_atom(p.t1), trans_atom(p.t2)
        lex.append(_fcat(qa, minus))
        lex.append(_fcat(minus, eq[0]))
        lex += [_fcat(eq[i], eq[i + 1]) for i in range(m - 1)]
        lex.append(_fcat(eq[-1], plus))
        lex.append(_fcat(plus, t1))
        lex += [_fcat(s, s, t2) for s in sym]
        rules.append(_fwd(m, [qa], [minus]))
        for s in sym:
            rules.append(_fwd(0, [minus], [s]))
        rules.append(_fwd(2 * m, [minus], [eq[0]]))
        for i in range(1, m + 1):
            nxt = eq[i] if i < m else plus
            for s in sym:
                zs: list[str | None] = [None] * (2 * m)
                zs[i - 1] = zs[m + i - 1] = s
                rules.append(_fwd(2 * m, [eq[i - 1]], [nxt], zs))
        rules.append(_fwd(m, [plus], [t2]))
        for s in sym:
            rules.append(_fwd(2, [plus], [s], [s, t2]))
        rules.append(_fwd(m, [plus], [t1]))

    entries = [LexEntry(None, c) for c in dict.fromkeys(lex)]
    g = make_grammar(entries, rules, INIT)
    registry = {
        "states": {q: state_atom(q) for q in mach.states},
        "symbols": {("_" if a == BLANK else a): symbol_atom(a) for a in mach.alphabet},
        "transitions": {str(k): trans_atom(k) for k in range(len(mach.transitions))},
        "pairs": [
            {"index": p.index, "state": p.state, "symbol": "_" if p.symbol == BLANK else p.symbol, "t1": p.t1, "t2": p.t2}
            for p in pairs
        ],
        "reserved": [INIT, ACCEPT, CENT],
    }
    return AtmInstance(g, 2 * m + 2, m, mach, tuple(w), tuple(pairs), registry)


def solve_empty(inst: AtmInstance, max_items: int | None = None) -> ParseResult:
    return parse(inst.grammar, (), ParseConfig(arity_cap=inst.arity_bound, max_items=max_items))


def recognize_empty(inst: AtmInstance, max_items: int | None = None) -> bool:
    return solve_empty(inst, max_items).accepted


# -- decoding --------------------------------------------------------------------


def _config_of(inst: AtmInstance, c: Category) -> Config | None:
    """The configuration encoded by ``c`` when it has the shape q/s_a1/.../s_am."""
    states = {state_atom(q): q for q in inst.machine.states}
    symbols = {symbol_atom(a): a for a in inst.machine.alphabet}
    if c.target not in states or c.arity != inst.m:
        return None
    tape = []
    for arg in c.args:
        if arg.slash is not FWD or not arg.category.is_atomic or arg.category.target not in symbols:
            return None
        tape.append(symbols[arg.category.target])
    return Config(states[c.target], "".join(tape))


def _fragment_roots(inst: AtmInstance, t: Tree) -> list[Node]:
    """Nearest configuration-shaped nodes below ``t`` (``t`` itself excluded), left to right."""
    out = []
    stack = [t.right, t.left] if isinstance(t, Node) else []
    while stack:
        n = stack.pop()
        if isinstance(n, Leaf):
            continue
        if _config_of(inst, n.category) is not None:
            out.append(n)
        else:
            stack.append(n.right)
            stack.append(n.left)
    return out


def decode_computation(inst: AtmInstance, t: Tree) -> ComputationTree:
    bad = check_derivation(inst.grammar, t)
    if bad is not None:
        raise DecodeError(f"not a derivation of the instance grammar: {bad}")
    if top(t) != Category(INIT) or tree_yield(t):
        raise DecodeError("expected a derivation of init over the empty string")
    roots = _fragment_roots(inst, t)
    if len(roots) != 1:
        raise DecodeError(f"expected one initial fragment, found {len(roots)}")
    trans_of = {trans_atom(k): k for k in range(len(inst.machine.transitions))}
    pair_of = {f"pi{p.index}m": p for p in inst.pairs}

    def build(node: Node) -> ComputationTree:
        c = _config_of(inst, node.category)
        kids = [build(k) for k in _fragment_roots(inst, node)]
        if not kids:
            return ComputationTree(c)
        # the primary input of the fragment root is the lexical q/t_k or q/pi{k}m entry
        lead = node.left
        if not isinstance(lead, Leaf) or lead.category.arity != 1:
            raise DecodeError(f"fragment for {c} does not start with a lexical entry")
        label = lead.category.top.category.target
        if label in trans_of:
            if len(kids) != 1:
                raise DecodeError(f"existential fragment for {c} has {len(kids)} children")
            return ComputationTree(c, (trans_of[label],), tuple(kids))
        if label in pair_of:
            p = pair_of[label]
            if len(kids) != 2:
                raise DecodeError(f"universal fragment for {c} has {len(kids)} children")
            return ComputationTree(c, (p.t1, p.t2), tuple(kids))
        raise DecodeError(f"unrecognised fragment label {label}")

    tree = build(roots[0])
    bad_comp = validate_computation(inst.machine, inst.input, tree)
    if bad_comp is not None:
        raise DecodeError(f"decoded computation is invalid: {bad_comp}")
    return tree


def canonical_filter(inst: AtmInstance):
    """Predicate keeping derived categories whose arguments are all tape symbols,
    except that the topmost one may be ``cent`` or a transition atom.

    Every fragment of the construction only derives such categories. Other
    derived categories come from fragments composed in unintended ways, for
    instance ``q/t`` combined with the lexical ``t/a/q'`` itself when m = 2.
    """
    symbols = {atom(symbol_atom(a)) for a in inst.machine.alphabet}
    markers = {atom(CENT)} | {atom(trans_atom(k)) for k in range(len(inst.machine.transitions))}

    def keep(c: Category) -> bool:
        args = c.args
        for k, arg in enumerate(args):
            if arg.slash is not FWD:
                return False
            if arg.category in symbols:
                continue
            if k == len(args) - 1 and arg.category in markers:
                continue
            return False
        return True

    return keep


def canonical_derivation(inst: AtmInstance, max_items: int | None = None) -> Tree | None:
    """A derivation of ``init`` built only from fragment-shaped categories, if any."""
    cfg = ParseConfig(arity_cap=inst.arity_bound, max_items=max_items, item_filter=canonical_filter(inst))
    res = parse(inst.grammar, (), cfg)
    return res.derivation


def solve_atm(mach: Machine, w: Sequence[str], max_items: int | None = None):
    """Return ``(accepted, computation or None, parse result)``.

    Acceptance comes from the unrestricted parse; the computation is decoded
    from a canonical derivation.
    """
    inst = build_atm_instance(mach, w)
    res = solve_empty(inst, max_items)
    comp = None
    if res.accepted:
        t = canonical_derivation(inst, max_items)
        if t is None:
            raise DecodeError("accepted, but no canonical derivation exists")
        comp = decode_computation(inst, t)
    return res.accepted, comp, res
