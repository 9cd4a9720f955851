"""A reproducible pool of small machines for differential testing."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .atm import BLANK, Machine, MachineError, StateType, Transition, tape_cells, validate_machine


@dataclass
class PoolConfig:
    seed: int = 2017
    random_machines: int = 240
    max_states: int = 3
    max_input: int = 2
    max_cells: int = 2


HANDCRAFTED = {
    "accept_all": "states q0:A\nalphabet a\nstart q0\npoly 0 1\n",
    "reject_all": "states q0:R\nalphabet a\nstart q0\npoly 0 1\n",
    "one_step": "states q0:E q1:A\nalphabet a\nstart q0\npoly 0 1\ntrans q0 a -> q1 a\n",
    "fork": (
        "states q0:U q1:A q2:A\nalphabet a\nstart q0\npoly 0 1\n"
        "trans q0 a -> q1 a\ntrans q0 a -> q2 _\ntrans q0 _ -> q1 a\ntrans q0 _ -> q2 a\n"
    ),
    "fork_one_fails": (
        "states q0:U q1:A q2:R\nalphabet a\nstart q0\npoly 0 1\n"
        "trans q0 a -> q1 a\ntrans q0 a -> q2 _\ntrans q0 _ -> q1 a\ntrans q0 _ -> q2 a\n"
    ),
    # accepts iff the tape holds a b somewhere: scan right until it is seen
    "find_b": (
        "states q0:E q1:A\nalphabet a b\nstart q0\npoly 0 1\n"
        "trans q0 a -> q0 a\ntrans q0 b -> q1 b\n"
    ),
    # every cell must be an a: universal check that survives one rotation
    "all_a": (
        "states q0:U q1:E q2:A\nalphabet a b\nstart q0\npoly 0 1\n"
        "trans q0 a -> q1 a\ntrans q0 a -> q2 a\n"
        "trans q0 b -> q1 b\ntrans q0 b -> q1 b\n"
        "trans q0 _ -> q1 _\ntrans q0 _ -> q1 _\n"
        "trans q1 a -> q2 a\n"
    ),
    "loop_forever": "states q0:E\nalphabet a\nstart q0\npoly 1 1\ntrans q0 a -> q0 a\ntrans q0 _ -> q0 _\n",
}


def random_machine(rng: random.Random, max_states: int = 3) -> Machine:
    k = rng.randint(1, max_states)
    names = [f"q{i}" for i in range(k)]
    kinds = {q: rng.choice(list(StateType)) for q in names}
    alphabet = ("a",) if rng.random() < 0.5 else ("a", "b")
    symbols = alphabet + (BLANK,)
    poly = rng.choice([(0, 1), (1, 1)])
    trans = []
    for q in names:
        for a in symbols:
            if kinds[q] is StateType.E:
                fan = rng.choice([0, 1, 1, 2])
            elif kinds[q] is StateType.U:
                fan = 2
            else:
                fan = 0
            for _ in range(fan):
                trans.append(Transition(q, a, rng.choice(names), rng.choice(symbols)))
    m = Machine(kinds, symbols, tuple(trans), names[0], poly)
    validate_machine(m)
    return m


def inputs_for(m: Machine, max_input: int = 2, max_cells: int = 2) -> list[str]:
    out = []
    letters = [a for a in m.alphabet if a != BLANK]
    for n in range(max_input + 1):
        for w in itertools.product(letters, repeat=n):
            try:
                cells = tape_cells(m, w)
            except MachineError:
                continue
            if cells <= max_cells:
                out.append("".join(w))
    return out


def machine_pool(cfg: PoolConfig | None = None) -> list[tuple[str, Machine]]:
    from .atm import parse_machine

    cfg = cfg or PoolConfig()
    pool = [(name, parse_machine(text)) for name, text in HANDCRAFTED.items()]
    rng = random.Random(cfg.seed)
    for i in range(cfg.random_machines):
        pool.append((f"random{i:03d}", random_machine(rng, cfg.max_states)))
    return pool


def pool_cases(cfg: PoolConfig | None = None) -> list[tuple[str, Machine, str]]:
    cfg = cfg or PoolConfig()
    return [
        (name, m, w)
        for name, m in machine_pool(cfg)
        for w in inputs_for(m, cfg.max_input, cfg.max_cells)
    ]
