"""Alternating Turing machines with a circular tape.

The head always reads the first tape cell. A transition ``(q, a) -> (q', a')``
overwrites ``a`` with ``a'`` and rotates the tape left by one, so the
successor of ``(q, a rest)`` is ``(q', rest a')``.

Machine file format (``#`` starts a comment, the blank is written ``_``)::

    states q0:E q1:A q2:U
    alphabet a b
    start q0
    poly 0 1                 # p(n) = 0 + 1*n, low order first
    trans q0 a -> q1 _
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Sequence

BLANK = "#"
SYMBOL_RE = re.compile(r"[A-Za-z0-9]")
STATE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class StateType(Enum):
    E = "E"
    U = "U"
    A = "A"
    R = "R"


class MachineError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


class Transition(NamedTuple):
    state: str
    read: str
    next_state: str
    write: str

    def __str__(self) -> str:
        return f"({self.state},{self.read})->({self.next_state},{self.write})"


class Config(NamedTuple):
    state: str
    tape: str


@dataclass(frozen=True)
class Machine:
    states: dict[str, StateType]
    alphabet: tuple[str, ...]  # includes BLANK
    transitions: tuple[Transition, ...]
    start: str
    poly: tuple[int, ...] = (0, 1)

    def __hash__(self):
        return hash((tuple(sorted(self.states.items())), self.alphabet, self.transitions, self.start, self.poly))

    def type_of(self, q: str) -> StateType:
        return self.states[q]

    def outgoing(self, q: str, a: str) -> list[int]:
        return [k for k, t in enumerate(self.transitions) if t.state == q and t.read == a]


@dataclass(frozen=True)
class ComputationTree:
    config: Config
    transitions: tuple[int, ...] = ()
    children: tuple["ComputationTree", ...] = ()

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def config_multiset(self) -> Counter:
        return Counter(n.config for n in self.nodes())

    def height(self) -> int:
        return 0 if not self.children else 1 + max(c.height() for c in self.children)

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


# -- file format ----------------------------------------------------------------


def _sym(token: str) -> str:
    return BLANK if token == "_" else token


def parse_machine(text: str, pad: bool = True) -> Machine:
    states: dict[str, StateType] = {}
    alphabet: list[str] = []
    transitions: list[Transition] = []
    start = None
    poly: tuple[int, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "states":
                for item in rest:
                    name, _, kind = item.partition(":")
                    if not STATE_RE.fullmatch(name):
                        raise MachineError(f"illegal state name {name!r}")
                    if name in states:
                        raise MachineError(f"duplicate state {name!r}")
                    states[name] = StateType(kind)
            elif head == "alphabet":
                for s in rest:
                    if not SYMBOL_RE.fullmatch(s):
                        raise MachineError(f"tape symbols are single letters or digits, got {s!r}")
                    if s in alphabet:
                        raise MachineError(f"duplicate symbol {s!r}")
                    alphabet.append(s)
            elif head == "start":
                if len(rest) != 1:
                    raise MachineError("expected 'start <state>'")
                start = rest[0]
            elif head == "poly":
                poly = tuple(int(x) for x in rest)
                if not poly or any(x < 0 for x in poly):
                    raise MachineError("poly needs non-negative integer coefficients")
            elif head == "trans":
                if len(rest) != 5 or rest[2] != "->":
                    raise MachineError("expected 'trans q a -> q2 a2'")
                transitions.append(Transition(rest[0], _sym(rest[1]), rest[3], _sym(rest[4])))
            else:
                raise MachineError(f"unknown directive {head!r}")
        except MachineError as exc:
            raise MachineError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise MachineError(f"line {lineno}: {exc}") from None
    if start is None:
        raise MachineError("missing 'start' line")
    m = Machine(states, tuple(alphabet) + (BLANK,), tuple(transitions), start, poly or (0, 1))
    if pad:
        m = pad_universal(m)
    validate_machine(m)
    return m


def render_machine(m: Machine) -> str:
    def show(s):
        return "_" if s == BLANK else s

    lines = [
        "states " + " ".join(f"{q}:{t.value}" for q, t in m.states.items()),
        "alphabet " + " ".join(s for s in m.alphabet if s != BLANK),
        f"start {m.start}",
        "poly " + " ".join(map(str, m.poly)),
    ]
    lines += [f"trans {t.state} {show(t.read)} -> {t.next_state} {show(t.write)}" for t in m.transitions]
    return "\n".join(lines) + "\n"


def validate_machine(m: Machine) -> list[str]:
    """Raise ``MachineError`` on structural errors; return warnings."""
    if m.start not in m.states:
        raise MachineError(f"start state {m.start!r} is not declared")
    if len(set(m.alphabet)) != len(m.alphabet) or BLANK not in m.alphabet:
        raise MachineError("alphabet symbols must be distinct and include the blank")
    for t in m.transitions:
        if t.state not in m.states or t.next_state not in m.states:
            raise MachineError(f"unknown state in transition {t}")
        if t.read not in m.alphabet or t.write not in m.alphabet:
            raise MachineError(f"unknown symbol in transition {t}")
        if m.states[t.state] not in (StateType.E, StateType.U):
            raise MachineError(f"transition {t} leaves a {m.states[t.state].value} state")
    warnings = []
    for q, kind in m.states.items():
        if kind is not StateType.U:
            continue
        for a in m.alphabet:
            k = len(m.outgoing(q, a))
            if k == 0:
                warnings.append(f"universal ({q},{a}) has no transitions; such configurations reject")
            elif k != 2:
                raise MachineError(f"universal ({q},{a}) has {k} transitions, exactly two are required")
    return warnings


def pad_universal(m: Machine) -> Machine:
    """Duplicate the single transition of any universal (q, a) that has just one."""
    extra = []
    for q, kind in m.states.items():
        if kind is not StateType.U:
            continue
        for a in m.alphabet:
            ks = m.outgoing(q, a)
            if len(ks) > 2:
                raise MachineError(f"universal ({q},{a}) has {len(ks)} transitions; fan-out above two is unsupported")
            if len(ks) == 1:
                extra.append(m.transitions[ks[0]])
    if not extra:
        return m
    return replace(m, transitions=m.transitions + tuple(extra))


# -- semantics ------------------------------------------------------------------


def tape_cells(m: Machine, w: Sequence[str]) -> int:
    n = len(w)
    cells = sum(c * n**i for i, c in enumerate(m.poly))
    if cells < max(n, 1):
        raise MachineError(f"p({n}) = {cells} cells cannot hold the input (need at least {max(n, 1)})")
    return cells


def initial_config(m: Machine, w: Sequence[str]) -> Config:
    cells = tape_cells(m, w)
    for s in w:
        if s not in m.alphabet:
            raise MachineError(f"input symbol {s!r} is not in the alphabet")
    return Config(m.start, "".join(w) + BLANK * (cells - len(w)))


def successor(c: Config, t: Transition) -> Config:
    if c.state != t.state or not c.tape or c.tape[0] != t.read:
        raise MachineError(f"transition {t} does not apply to {c}")
    return Config(t.next_state, c.tape[1:] + t.write)


def _reachable(m: Machine, root: Config, budget: int) -> list[Config]:
    seen = {root}
    order = [root]
    for c in order:
        for k in m.outgoing(c.state, c.tape[0]):
            s = successor(c, m.transitions[k])
            if s not in seen:
                if len(seen) >= budget:
                    raise BudgetError(f"more than {budget} reachable configurations")
                seen.add(s)
                order.append(s)
    return order


@dataclass
class Acceptance:
    """Least-fixpoint acceptance levels over the reachable configurations."""

    machine: Machine
    root: Config
    level: dict[Config, int] = field(default_factory=dict)
    iterations: int = 0

    @property
    def accepted(self) -> bool:
        return self.root in self.level


def acceptance_levels(m: Machine, w: Sequence[str], budget: int = 200_000) -> Acceptance:
    """Iterate the acceptance operator from the empty set.

    A configuration enters at iteration k when its condition holds using only
    configurations that entered before k; that k is its level.
    """
    root = initial_config(m, w)
    space = len(m.states) * len(m.alphabet) ** len(root.tape)
    if space > budget:
        raise BudgetError(f"configuration space {space} exceeds budget {budget}")
    configs = _reachable(m, root, budget)
    succ = {}
    for c in configs:
        ks = m.outgoing(c.state, c.tape[0])
        succ[c] = [successor(c, m.transitions[k]) for k in ks]
    level: dict[Config, int] = {}
    k = 0
    while True:
        new = []
        for c in configs:
            if c in level:
                continue
            kind = m.states[c.state]
            if kind is StateType.A:
                ok = True
            elif kind is StateType.E:
                ok = any(s in level for s in succ[c])
            elif kind is StateType.U:
                ok = bool(succ[c]) and all(s in level for s in succ[c])
            else:
                ok = False
            if ok:
                new.append(c)
        if not new:
            break
        for c in new:
            level[c] = k
        k += 1
    return Acceptance(m, root, level, k)


def accepts(m: Machine, w: Sequence[str], budget: int = 200_000) -> bool:
    return acceptance_levels(m, w, budget).accepted


def accepting_computation(m: Machine, w: Sequence[str], budget: int = 200_000) -> ComputationTree | None:
    acc = acceptance_levels(m, w, budget)
    if not acc.accepted:
        return None

    def build(c: Config) -> ComputationTree:
        kind = m.states[c.state]
        if kind is StateType.A:
            return ComputationTree(c)
        ks = m.outgoing(c.state, c.tape[0])
        if kind is StateType.E:
            best = min(
                (k for k in ks if successor(c, m.transitions[k]) in acc.level),
                key=lambda k: (acc.level[successor(c, m.transitions[k])], k),
            )
            return ComputationTree(c, (best,), (build(successor(c, m.transitions[best])),))
        return ComputationTree(c, tuple(ks), tuple(build(successor(c, m.transitions[k])) for k in ks))

    return build(acc.root)


def validate_computation(m: Machine, w: Sequence[str], tree: ComputationTree) -> str | None:
    """``None`` when ``tree`` is an accepting computation of ``m`` on ``w``."""
    root = initial_config(m, w)
    if tree.config != root:
        return f"root {tree.config} is not the initial configuration {root}"
    stack = [tree]
    while stack:
        node = stack.pop()
        c = node.config
        if c.state not in m.states:
            return f"unknown state in {c}"
        kind = m.states[c.state]
        if len(node.transitions) != len(node.children):
            return f"{c}: transition labels do not match children"
        if kind is StateType.A:
            if node.children:
                return f"{c}: accepting configuration with children"
            continue
        if kind is StateType.R:
            return f"{c}: rejecting configuration in computation"
        want = 1 if kind is StateType.E else 2
        if len(node.children) != want:
            return f"{c}: {kind.value} configuration needs {want} children, has {len(node.children)}"
        if kind is StateType.U:
            if len(set(node.transitions)) != 2 or sorted(node.transitions) != sorted(m.outgoing(c.state, c.tape[0])):
                return f"{c}: universal node must use both transitions on ({c.state},{c.tape[0]})"
        for k, child in zip(node.transitions, node.children):
            if not 0 <= k < len(m.transitions):
                return f"{c}: unknown transition {k}"
            t = m.transitions[k]
            if t.state != c.state or t.read != c.tape[0]:
                return f"{c}: transition {t} does not apply"
            if successor(c, t) != child.config:
                return f"{c}: child {child.config} is not the successor under {t}"
            stack.append(child)
    return None


def computations_up_to(m: Machine, c: Config, depth: int, limit: int = 10_000) -> list[ComputationTree]:
    """All accepting computations rooted at ``c`` of height at most ``depth``."""
    kind = m.states[c.state]
    if kind is StateType.A:
        return [ComputationTree(c)]
    if depth == 0 or kind is StateType.R:
        return []
    ks = m.outgoing(c.state, c.tape[0])
    out: list[ComputationTree] = []
    if kind is StateType.E:
        for k in ks:
            for sub in computations_up_to(m, successor(c, m.transitions[k]), depth - 1, limit):
                out.append(ComputationTree(c, (k,), (sub,)))
                if len(out) >= limit:
                    return out
    elif len(ks) == 2:
        lefts = computations_up_to(m, successor(c, m.transitions[ks[0]]), depth - 1, limit)
        rights = computations_up_to(m, successor(c, m.transitions[ks[1]]), depth - 1, limit)
        for a in lefts:
            for b in rights:
                out.append(ComputationTree(c, tuple(ks), (a, b)))
                if len(out) >= limit:
                    return out
    return out


def show_tape(tape: str) -> str:
    return tape.replace(BLANK, "_")


def computation_to_document(tree: ComputationTree) -> dict:
    return {
        "state": tree.config.state,
        "tape": show_tape(tree.config.tape),
        "transitions": list(tree.transitions),
        "children": [computation_to_document(c) for c in tree.children],
    }


def render_computation(tree: ComputationTree, indent: str = "") -> str:
    c = tree.config
    via = f"  via {list(tree.transitions)}" if tree.transitions else ""
    out = f"{indent}({c.state}, {show_tape(c.tape)}){via}\n"
    for child in tree.children:
        out += render_computation(child, indent + "  ")
    return out
