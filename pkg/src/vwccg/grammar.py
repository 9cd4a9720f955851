"""Grammars: lexicon, restricted combinatory rules, and the grammar file format.

File format (line oriented, ``#`` starts a comment)::

    start S
    atoms S NP N              # optional; otherwise inferred from use
    lex prove := (S\\NP)/NP
    lex EPS := S              # entry for the empty string
    rule fwd deg=0
    rule bwd deg=1 slashes=/ target={S} Y={S\\NP}
    rule fwd deg=2 slashes=// Y={cent} Z1={v1T} Z2={cent}
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .category import (
    ATOM_RE,
    BWD,
    FWD,
    Category,
    CategorySyntaxError,
    Slash,
    parse_category,
    render_category,
)

EPS = "EPS"


class GrammarError(ValueError):
    """Syntax or validation error in a grammar; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class LexEntry:
    word: str | None  # None is the empty string
    category: Category

    def __str__(self) -> str:
        return f"{self.word if self.word is not None else EPS} := {self.category}"


@dataclass(frozen=True)
class Rule:
    schema: Slash
    degree: int = 0
    arg_slashes: tuple[Slash, ...] = ()
    target_constraint: frozenset[str] | None = None
    y_constraint: frozenset[Category] | None = None
    z_constraints: tuple[frozenset[Category] | None, ...] = ()

    def __post_init__(self):
        if self.degree < 0:
            raise GrammarError(f"negative degree {self.degree}")
        if len(self.arg_slashes) != self.degree:
            raise GrammarError(
                f"degree {self.degree} needs {self.degree} slashes, got {len(self.arg_slashes)}"
            )
        if not self.z_constraints:
            object.__setattr__(self, "z_constraints", (None,) * self.degree)
        if len(self.z_constraints) != self.degree:
            raise GrammarError("one Z constraint slot per degree position is required")
        for name, s in [("target", self.target_constraint), ("Y", self.y_constraint), *(
            (f"Z{i + 1}", z) for i, z in enumerate(self.z_constraints)
        )]:
            if s is not None and len(s) == 0:
                raise GrammarError(f"empty {name} constraint")

    def atoms(self) -> set[str]:
        out = set(self.target_constraint or ())
        for c in self.y_constraint or ():
            out |= c.atoms()
        for z in self.z_constraints:
            for c in z or ():
                out |= c.atoms()
        return out

    def __str__(self) -> str:
        return render_rule(self)


@dataclass(frozen=True)
class GrammarStats:
    lam: int  # largest lexicon category size
    gamma: int  # largest lexicon category arity
    alpha: int  # largest argument size (slash included) in the lexicon
    dmax: int  # largest rule degree


@dataclass(frozen=True)
class Grammar:
    vocabulary: frozenset[str]
    atoms: frozenset[str]
    lexicon: tuple[LexEntry, ...]
    rules: tuple[Rule, ...]
    start: str

    def __post_init__(self):
        validate_grammar(self)

    @cached_property
    def by_word(self) -> dict[str | None, tuple[Category, ...]]:
        table: dict[str | None, list[Category]] = {}
        for e in self.lexicon:
            table.setdefault(e.word, [])
            if e.category not in table[e.word]:
                table[e.word].append(e.category)
        return {w: tuple(cs) for w, cs in table.items()}

    @cached_property
    def entry_set(self) -> frozenset[LexEntry]:
        return frozenset(self.lexicon)

    @property
    def epsilon_categories(self) -> tuple[Category, ...]:
        return self.by_word.get(None, ())


def make_grammar(
    lexicon: Iterable[LexEntry],
    rules: Iterable[Rule],
    start: str,
    atoms: Iterable[str] = (),
    vocabulary: Iterable[str] = (),
) -> Grammar:
    """Build a grammar, inferring atoms and vocabulary from use."""
    lexicon = tuple(lexicon)
    rules = tuple(rules)
    all_atoms = set(atoms) | {start}
    for e in lexicon:
        all_atoms |= e.category.atoms()
    for r in rules:
        all_atoms |= r.atoms()
    vocab = set(vocabulary) | {e.word for e in lexicon if e.word is not None}
    return Grammar(frozenset(vocab), frozenset(all_atoms), lexicon, rules, start)


def validate_grammar(g: Grammar) -> None:
    if g.start not in g.atoms:
        raise GrammarError(f"start atom {g.start!r} is not a declared atom")
    for a in g.atoms:
        if not ATOM_RE.fullmatch(a):
            raise GrammarError(f"illegal atom name {a!r}")
    for e in g.lexicon:
        if e.word is not None:
            if not e.word or e.word not in g.vocabulary:
                raise GrammarError(f"lexicon word {e.word!r} is not in the vocabulary")
        missing = e.category.atoms() - g.atoms
        if missing:
            raise GrammarError(f"undeclared atoms {sorted(missing)} in entry {e}")
    for r in g.rules:
        missing = r.atoms() - g.atoms
        if missing:
            raise GrammarError(f"undeclared atoms {sorted(missing)} in rule {r}")


# -- rule semantics ----------------------------------------------------------


def match_rule(r: Rule, primary: Category, secondary: Category) -> Category | None:
    """Output of the ground instance of ``r`` on the two inputs, or ``None``."""
    pargs = primary.args
    if not pargs:
        return None
    top = pargs[-1]
    if top.slash is not r.schema:
        return None
    d = r.degree
    sargs = secondary.args
    if d:
        if len(sargs) < d:
            return None
        zs = sargs[-d:]
        if Category(secondary.target, sargs[:-d]) is not top.category:
            return None
        for z, s in zip(zs, r.arg_slashes):
            if z.slash is not s:
                return None
    else:
        zs = ()
        if secondary is not top.category:
            return None
    if r.target_constraint is not None and primary.target not in r.target_constraint:
        return None
    if r.y_constraint is not None and top.category not in r.y_constraint:
        return None
    for z, allowed in zip(zs, r.z_constraints):
        if allowed is not None and z.category not in allowed:
            return None
    return Category(primary.target, pargs[:-1] + zs)


def apply_rule(r: Rule, left: Category, right: Category) -> Category | None:
    """``match_rule`` with the left/right order of the schema resolved."""
    if r.schema is FWD:
        return match_rule(r, left, right)
    return match_rule(r, right, left)


def applicable_combinations(g: Grammar, left: Category, right: Category) -> list[tuple[int, Category]]:
    out = []
    for rid, r in enumerate(g.rules):
        res = apply_rule(r, left, right)
        if res is not None:
            out.append((rid, res))
    return out


def ground_instances_check(r: Rule, primary: Category, secondary: Category, output: Category) -> bool:
    return match_rule(r, primary, secondary) is output


def is_epsilon_free(g: Grammar) -> bool:
    return all(e.word is not None for e in g.lexicon)


def grammar_stats(g: Grammar) -> GrammarStats:
    if not g.lexicon:
        raise GrammarError("grammar statistics need a non-empty lexicon")
    lam = max(e.category.size() for e in g.lexicon)
    gamma = max(e.category.arity for e in g.lexicon)
    alpha = max((1 + a.category.size() for e in g.lexicon for a in e.category.args), default=0)
    dmax = max((r.degree for r in g.rules), default=0)
    return GrammarStats(lam, gamma, alpha, dmax)


# -- text format -------------------------------------------------------------

_OPT_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*)=(\{[^{}]*\}|\S+)")


def _parse_set(value: str, lineno: int) -> list[str]:
    if not (value.startswith("{") and value.endswith("}")):
        raise GrammarError(f"expected a {{...}} set, got {value!r}", lineno)
    items = [v.strip() for v in value[1:-1].split(",")]
    if items == [""]:
        raise GrammarError("constraint of length 0", lineno)
    if any(not v for v in items):
        raise GrammarError(f"empty element in {value!r}", lineno)
    return items


def _parse_cat(text: str, lineno: int) -> Category:
    try:
        return parse_category(text)
    except CategorySyntaxError as exc:
        raise GrammarError(str(exc), lineno) from None


def _parse_rule(rest: str, lineno: int) -> Rule:
    parts = rest.split(None, 1)
    if not parts or parts[0] not in ("fwd", "bwd"):
        raise GrammarError("rule must start with 'fwd' or 'bwd'", lineno)
    schema = FWD if parts[0] == "fwd" else BWD
    opts: dict[str, str] = {}
    tail = parts[1] if len(parts) > 1 else ""
    pos = 0
    while pos < len(tail):
        if not tail[pos:].strip():
            break
        m = _OPT_RE.match(tail, pos)
        if m is None:
            raise GrammarError(f"cannot parse rule option near {tail[pos:].strip()!r}", lineno)
        if m.group(1) in opts:
            raise GrammarError(f"duplicate option {m.group(1)!r}", lineno)
        opts[m.group(1)] = m.group(2)
        pos = m.end()
    if "deg" not in opts:
        raise GrammarError("rule needs deg=<d>", lineno)
    try:
        degree = int(opts.pop("deg"))
    except ValueError:
        raise GrammarError("deg must be an integer", lineno) from None
    if degree < 0:
        raise GrammarError("deg must be non-negative", lineno)
    slashes = opts.pop("slashes", "")
    if degree and not slashes:
        raise GrammarError("slashes=... is mandatory when deg >= 1", lineno)
    if len(slashes) != degree or any(s not in "/\\" for s in slashes):
        raise GrammarError(f"slash-count mismatch: deg={degree} but slashes={slashes!r}", lineno)
    target = y = None
    zs: list[frozenset[Category] | None] = [None] * degree
    for key, value in opts.items():
        if key == "target":
            names = _parse_set(value, lineno)
            for n in names:
                if not ATOM_RE.fullmatch(n):
                    raise GrammarError(f"illegal atom {n!r} in target constraint", lineno)
            target = frozenset(names)
        elif key == "Y":
            y = frozenset(_parse_cat(v, lineno) for v in _parse_set(value, lineno))
        elif re.fullmatch(r"Z[0-9]+", key):
            i = int(key[1:])
            if not 1 <= i <= degree:
                raise GrammarError(f"{key} is out of range for degree {degree}", lineno)
            zs[i - 1] = frozenset(_parse_cat(v, lineno) for v in _parse_set(value, lineno))
        else:
            raise GrammarError(f"unknown rule option {key!r}", lineno)
    try:
        return Rule(schema, degree, tuple(Slash(s) for s in slashes), target, y, tuple(zs))
    except GrammarError as exc:
        raise GrammarError(str(exc), lineno) from None


def parse_grammar(text: str) -> Grammar:
    start = None
    atoms: set[str] = set()
    vocab: set[str] = set()
    lexicon: list[LexEntry] = []
    rules: list[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "start":
            if start is not None:
                raise GrammarError("duplicate start declaration", lineno)
            if not ATOM_RE.fullmatch(rest):
                raise GrammarError(f"illegal start atom {rest!r}", lineno)
            start = rest
        elif head == "atoms":
            for a in rest.split():
                if not ATOM_RE.fullmatch(a):
                    raise GrammarError(f"illegal atom {a!r}", lineno)
                atoms.add(a)
        elif head == "vocab":
            vocab.update(rest.split())
        elif head == "lex":
            word, sep, cattext = rest.partition(":=")
            word = word.strip()
            if not sep or not word or len(word.split()) != 1:
                raise GrammarError("expected 'lex <word> := <category>'", lineno)
            lexicon.append(LexEntry(None if word == EPS else word, _parse_cat(cattext, lineno)))
        elif head == "rule":
            rules.append(_parse_rule(rest, lineno))
        else:
            raise GrammarError(f"unknown directive {head!r}", lineno)
    if start is None:
        raise GrammarError("missing 'start' declaration")
    declared = bool(atoms)
    if declared:
        used = {start}
        for e in lexicon:
            used |= e.category.atoms()
        for r in rules:
            used |= r.atoms()
        if used - atoms:
            raise GrammarError(f"unknown atoms {sorted(used - atoms)} (atoms were declared)")
    return make_grammar(lexicon, rules, start, atoms, vocab)


def _render_set(cats: Iterable[Category]) -> str:
    return "{" + ",".join(sorted(render_category(c) for c in cats)) + "}"


def render_rule(r: Rule) -> str:
    parts = ["fwd" if r.schema is FWD else "bwd", f"deg={r.degree}"]
    if r.degree:
        parts.append("slashes=" + "".join(s.value for s in r.arg_slashes))
    if r.target_constraint is not None:
        parts.append("target={" + ",".join(sorted(r.target_constraint)) + "}")
    if r.y_constraint is not None:
        parts.append("Y=" + _render_set(r.y_constraint))
    for i, z in enumerate(r.z_constraints, 1):
        if z is not None:
            parts.append(f"Z{i}=" + _render_set(z))
    return " ".join(parts)


def render_grammar(g: Grammar) -> str:
    lines = [f"start {g.start}", "atoms " + " ".join(sorted(g.atoms))]
    extra_vocab = g.vocabulary - {e.word for e in g.lexicon}
    if extra_vocab:
        lines.append("vocab " + " ".join(sorted(extra_vocab)))
    lines += [f"lex {e}" for e in g.lexicon]
    lines += [f"rule {render_rule(r)}" for r in g.rules]
    return "\n".join(lines) + "\n"


def grammar_size(g: Grammar) -> int:
    """Serialized size in characters."""
    return len(render_grammar(g))


def dedup_rules(rules: Sequence[Rule]) -> list[Rule]:
    seen = set()
    out = []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out
