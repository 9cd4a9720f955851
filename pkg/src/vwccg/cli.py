"""Command-line entry point.

Exit codes: 0 accepted, 1 rejected, 2 usage or input error, 3 resource
budget exhausted or a rejection the parser cannot certify.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .atm import (
    BudgetError,
    MachineError,
    accepting_computation,
    acceptance_levels,
    computation_to_document,
    parse_machine,
    render_computation,
)
from .atm_reduction import DecodeError, build_atm_instance, canonical_derivation, decode_computation, solve_empty
from .category import CategorySyntaxError
from .derivation import DerivationFormatError, check_derivation, deserialize, render_tree, serialize, to_dot, tree_yield
from .fixtures import read_input_file
from .grammar import GrammarError, is_epsilon_free, parse_grammar, render_grammar
from .parser import BudgetExceeded, ParseConfig, ParseError, parse
from .sat import DimacsError, brute_force_sat, build_sat_instance, decode_assignment, parse_dimacs

ACCEPT, REJECT, INPUT_ERROR, BUDGET = 0, 1, 2, 3

INPUT_ERRORS = (
    OSError,
    GrammarError,
    CategorySyntaxError,
    DerivationFormatError,
    DimacsError,
    MachineError,
    ParseError,
)


class CommandError(Exception):
    """Input problem detected by a command; maps to exit 2."""


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Output:
    """Collects the verdict and stats; prints text lines or one JSON document."""

    def __init__(self, command: str, fmt: str):
        self.command = command
        self.fmt = fmt
        self.stats: dict = {}
        self.accepted: bool | None = None

    def line(self, text: str) -> None:
        if self.fmt == "text":
            print(text)

    def finish(self, code: int) -> int:
        if self.fmt == "json":
            doc = {"command": self.command, "accepted": self.accepted, "exit": code, "stats": self.stats}
            print(json.dumps(doc, sort_keys=True))
        return code


def _tokens(args) -> list[str]:
    if args.empty:
        if args.tokens:
            raise CommandError("--empty cannot be combined with input tokens")
        return []
    if len(args.tokens) == 1 and " " in args.tokens[0]:
        return args.tokens[0].split()
    return list(args.tokens)


# -- commands ------------------------------------------------------------------


def cmd_parse(args, out: Output) -> int:
    g = parse_grammar(read_input_file(args.grammar))
    w = _tokens(args)
    res = parse(g, w, ParseConfig(arity_cap=args.arity_cap, max_items=args.max_items))
    out.accepted = res.accepted
    out.stats = {"items": res.items_created, "arity_cap": res.arity_cap, "cap_hit": res.cap_hit, "length": len(w)}
    if res.accepted:
        out.line("ACCEPT")
        if args.derivation:
            write_atomic(args.derivation, serialize(res.derivation, indent=2) + "\n")
        if args.tree:
            write_atomic(args.tree, render_tree(res.derivation))
        if args.dot:
            write_atomic(args.dot, to_dot(res.derivation))
        return ACCEPT
    if res.cap_hit and not is_epsilon_free(g) and args.arity_cap is None:
        out.line("UNKNOWN (arity cap reached; rejection is not certified)")
        return BUDGET
    out.line("REJECT")
    return REJECT


def cmd_check(args, out: Output) -> int:
    g = parse_grammar(read_input_file(args.grammar))
    t = deserialize(read_input_file(args.derivation))
    expected = None
    if args.input is not None:
        expected = args.input.split()
    bad = check_derivation(g, t, expected_yield=expected, require_start=args.require_start)
    out.accepted = bad is None
    out.stats = {"yield": tree_yield(t)}
    if bad is None:
        out.line("OK")
        return ACCEPT
    out.stats["violation"] = str(bad)
    out.line(f"VIOLATION {bad}")
    return REJECT


def cmd_reduce_sat(args, out: Output) -> int:
    phi = parse_dimacs(read_input_file(args.cnf))
    try:
        inst = build_sat_instance(phi)
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    report = inst.report()
    out.stats = report
    if args.out_grammar:
        write_atomic(args.out_grammar, render_grammar(inst.grammar))
    if args.out_input:
        write_atomic(args.out_input, " ".join(inst.input) + "\n")
    if args.report or not (args.out_grammar or args.out_input):
        for k, v in report.items():
            out.line(f"{k}: {v}")
    return ACCEPT


def _show_assignment(a: dict[int, bool]) -> str:
    return " ".join(f"v{j}={int(v)}" for j, v in sorted(a.items()))


def cmd_solve_sat(args, out: Output) -> int:
    phi = parse_dimacs(read_input_file(args.cnf))
    out.stats = {"n": phi.num_vars, "m": len(phi.clauses), "size_phi": phi.size}
    if any(not c for c in phi.clauses):
        assignment = None
    else:
        inst = build_sat_instance(phi)
        res = parse(inst.grammar, inst.input, ParseConfig(arity_cap=inst.arity_bound, max_items=args.max_items))
        out.stats.update(items=res.items_created, cap_hit=res.cap_hit)
        assignment = decode_assignment(inst, res.derivation) if res.accepted else None
    out.accepted = assignment is not None
    if assignment is not None and not phi.satisfied_by(assignment):
        out.line("ERROR decoded assignment does not satisfy the formula")
        return INPUT_ERROR
    if args.oracle:
        truth = brute_force_sat(phi) is not None
        out.stats["oracle"] = truth
        if truth != out.accepted:
            out.line(f"DISAGREE reduction={out.accepted} oracle={truth}")
            return INPUT_ERROR
    if assignment is None:
        out.line("UNSAT")
        return REJECT
    out.stats["assignment"] = {f"v{j}": int(v) for j, v in sorted(assignment.items())}
    out.line("SAT")
    out.line(_show_assignment(assignment))
    return ACCEPT


def _machine_input(args):
    mach = parse_machine(read_input_file(args.machine))
    w = args.input if args.input != "-" else ""
    return mach, w


def _write_computation(path: str, comp) -> None:
    write_atomic(path, json.dumps(computation_to_document(comp), indent=2) + "\n")


def cmd_run_atm(args, out: Output) -> int:
    mach, w = _machine_input(args)
    acc = acceptance_levels(mach, w, budget=args.budget)
    out.accepted = acc.accepted
    out.stats = {"m": len(acc.root.tape), "configs": len(acc.level), "iterations": acc.iterations}
    if not acc.accepted:
        out.line("REJECT")
        return REJECT
    comp = accepting_computation(mach, w, budget=args.budget)
    out.stats["computation_nodes"] = comp.size()
    out.line("ACCEPT")
    if args.tree:
        _write_computation(args.tree, comp)
    elif args.show:
        out.line(render_computation(comp).rstrip())
    return ACCEPT


def cmd_reduce_atm(args, out: Output) -> int:
    mach, w = _machine_input(args)
    inst = build_atm_instance(mach, w)
    out.stats = {
        "m": inst.m,
        "arity_bound": inst.arity_bound,
        "rules": len(inst.grammar.rules),
        "lexicon": len(inst.grammar.lexicon),
    }
    if args.out:
        write_atomic(args.out, render_grammar(inst.grammar))
        write_atomic(args.out + ".meta.json", inst.sidecar() + "\n")
    else:
        out.line(render_grammar(inst.grammar).rstrip())
    return ACCEPT


def cmd_solve_atm(args, out: Output) -> int:
    mach, w = _machine_input(args)
    inst = build_atm_instance(mach, w)
    res = solve_empty(inst, args.max_items)
    out.accepted = res.accepted
    out.stats = {"m": inst.m, "arity_bound": inst.arity_bound, "items": res.items_created, "cap_hit": res.cap_hit}
    if args.oracle:
        truth = acceptance_levels(mach, w, budget=args.budget).accepted
        out.stats["oracle"] = truth
        if truth != res.accepted:
            out.line(f"DISAGREE grammar={res.accepted} simulator={truth}")
            return INPUT_ERROR
    if not res.accepted:
        out.line("REJECT")
        return REJECT
    out.line("ACCEPT")
    if args.tree or args.show:
        t = canonical_derivation(inst, args.max_items)
        if t is None:
            raise DecodeError("no canonical derivation to decode")
        comp = decode_computation(inst, t)
        out.stats["computation_nodes"] = comp.size()
        if args.tree:
            _write_computation(args.tree, comp)
        if args.show:
            out.line(render_computation(comp).rstrip())
    return ACCEPT


# -- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vwccg", description="Recognition, certificates and reductions for VW-CCG.")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="decide membership of a token string")
    p.add_argument("grammar")
    p.add_argument("tokens", nargs="*")
    p.add_argument("--empty", action="store_true", help="parse the empty string")
    p.add_argument("--arity-cap", type=int)
    p.add_argument("--max-items", type=int)
    p.add_argument("--derivation", help="write the derivation as JSON")
    p.add_argument("--tree", help="write an indented text rendering")
    p.add_argument("--dot", help="write a Graphviz rendering")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", help="verify a derivation document")
    p.add_argument("grammar")
    p.add_argument("derivation")
    p.add_argument("--input", help="expected yield, space separated")
    p.add_argument("--require-start", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce-sat", help="compile a DIMACS formula into a grammar and a string")
    p.add_argument("cnf")
    p.add_argument("--out-grammar")
    p.add_argument("--out-input")
    p.add_argument("--report", action="store_true")
    p.set_defaults(func=cmd_reduce_sat)

    p = sub.add_parser("solve-sat", help="decide a DIMACS formula through the grammar")
    p.add_argument("cnf")
    p.add_argument("--oracle", action="store_true", help="compare with brute force")
    p.add_argument("--max-items", type=int)
    p.set_defaults(func=cmd_solve_sat)

    for name, func, helptext in [
        ("run-atm", cmd_run_atm, "simulate a machine directly"),
        ("reduce-atm", cmd_reduce_atm, "compile a machine and input into a grammar"),
        ("solve-atm", cmd_solve_atm, "decide acceptance through the grammar"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("machine")
        p.add_argument("input", nargs="?", default="", help="input word, e.g. ab ('-' for empty)")
        p.add_argument("--budget", type=int, default=200_000, help="configuration budget for the simulator")
        p.set_defaults(func=func)
        if name == "reduce-atm":
            p.add_argument("--out", help="grammar path; metadata goes to PATH.meta.json")
        else:
            p.add_argument("--tree", help="write the accepting computation as JSON")
            p.add_argument("--show", action="store_true", help="print the accepting computation")
        if name == "solve-atm":
            p.add_argument("--oracle", action="store_true", help="compare with the simulator")
            p.add_argument("--max-items", type=int)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.command, args.format)
    try:
        code = args.func(args, out)
    except (BudgetExceeded, BudgetError) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        code = BUDGET
    except (CommandError, DecodeError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = INPUT_ERROR
    return out.finish(code)


if __name__ == "__main__":
    sys.exit(main())
