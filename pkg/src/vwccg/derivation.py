"""Derivation trees, the certificate checker, and a brute-force enumerator.

The enumerator is deliberately independent of the chart parser: it recurses
over spans and exact node counts and never shares state with the agenda.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .category import Category, parse_category, render_category
from .grammar import Grammar, LexEntry, apply_rule


@dataclass(frozen=True)
class Leaf:
    entry: LexEntry

    @property
    def category(self) -> Category:
        return self.entry.category


@dataclass(frozen=True)
class Node:
    category: Category
    rule: int
    left: "Tree"
    right: "Tree"


Tree = Union[Leaf, Node]


class DerivationFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]  # child indices from the root, 0 = left
    message: str

    def __str__(self) -> str:
        where = "root" if not self.path else "root." + ".".join(map(str, self.path))
        return f"{where}: {self.message}"


def top(t: Tree) -> Category:
    return t.entry.category if isinstance(t, Leaf) else t.category


def tree_yield(t: Tree) -> list[str]:
    out: list[str] = []
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Leaf):
            if n.entry.word is not None:
                out.append(n.entry.word)
        else:
            stack.append(n.right)
            stack.append(n.left)
    return out


def leaves(t: Tree) -> list[Leaf]:
    if isinstance(t, Leaf):
        return [t]
    return leaves(t.left) + leaves(t.right)


def node_count(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 1
    return 1 + node_count(t.left) + node_count(t.right)


def height(t: Tree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(height(t.left), height(t.right))


def iter_nodes(t: Tree, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Tree]]:
    """Pre-order traversal yielding ``(path, subtree)``."""
    stack = [(path, t)]
    while stack:
        p, n = stack.pop()
        yield p, n
        if isinstance(n, Node):
            stack.append((p + (1,), n.right))
            stack.append((p + (0,), n.left))


def check_derivation(
    g: Grammar,
    t: Tree,
    expected_yield: Sequence[str] | None = None,
    require_start: bool = False,
) -> Violation | None:
    """Verify every leaf against the lexicon and every node against its rule.

    Returns ``None`` when the tree is a valid derivation, otherwise the first
    offending node in pre-order. ``expected_yield`` and ``require_start``
    additionally bind the certificate to a particular input string.
    """
    if require_start and top(t) != Category(g.start):
        return Violation((), f"root category {top(t)} is not the start category {g.start}")
    for path, n in iter_nodes(t):
        if isinstance(n, Leaf):
            if n.entry not in g.entry_set:
                return Violation(path, f"lexicon entry {n.entry} is not in the grammar")
            continue
        if not 0 <= n.rule < len(g.rules):
            return Violation(path, f"unknown rule id {n.rule}")
        out = apply_rule(g.rules[n.rule], top(n.left), top(n.right))
        if out is None:
            return Violation(path, f"rule {n.rule} does not apply to {top(n.left)} and {top(n.right)}")
        if out is not n.category:
            return Violation(path, f"rule {n.rule} yields {out}, node claims {n.category}")
    if expected_yield is not None and tree_yield(t) != list(expected_yield):
        return Violation((), f"yield {tree_yield(t)} differs from {list(expected_yield)}")
    return None


# -- JSON documents ------------------------------------------------------------


def to_document(t: Tree) -> dict:
    if isinstance(t, Leaf):
        return {"word": t.entry.word, "cat": render_category(t.entry.category)}
    return {
        "cat": render_category(t.category),
        "rule": t.rule,
        "children": [to_document(t.left), to_document(t.right)],
    }


def from_document(doc) -> Tree:
    if not isinstance(doc, dict) or "cat" not in doc:
        raise DerivationFormatError(f"expected a node record with 'cat', got {doc!r}")
    try:
        category = parse_category(doc["cat"])
    except (ValueError, TypeError) as exc:
        raise DerivationFormatError(f"bad category: {exc}") from None
    if "children" in doc:
        kids = doc["children"]
        rule = doc.get("rule")
        if not isinstance(kids, list) or len(kids) != 2:
            raise DerivationFormatError("a node needs exactly two children")
        if not isinstance(rule, int) or isinstance(rule, bool):
            raise DerivationFormatError("a node needs an integer 'rule'")
        return Node(category, rule, from_document(kids[0]), from_document(kids[1]))
    if "word" not in doc:
        raise DerivationFormatError("a leaf needs a 'word' field (null for the empty string)")
    word = doc["word"]
    if word is not None and (not isinstance(word, str) or not word):
        raise DerivationFormatError(f"bad word {word!r}")
    return Leaf(LexEntry(word, category))


def serialize(t: Tree, indent: int | None = None) -> str:
    return json.dumps(to_document(t), indent=indent)


def deserialize(text: str) -> Tree:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DerivationFormatError(f"malformed JSON: {exc}") from None
    return from_document(doc)


def render_tree(t: Tree, indent: str = "") -> str:
    """Indented text rendering, root first."""
    if isinstance(t, Leaf):
        w = t.entry.word if t.entry.word is not None else "ε"
        return f"{indent}{t.entry.category}  <- {w}\n"
    return (
        f"{indent}{t.category}  [rule {t.rule}]\n"
        + render_tree(t.left, indent + "  ")
        + render_tree(t.right, indent + "  ")
    )


# -- brute-force enumeration ---------------------------------------------------


class Enumerator:
    """All derivations over ``w`` by span and exact node count.

    Node counts are odd (a tree with l leaves has 2l - 1 nodes), so every tree
    is produced exactly once from its unique (split, left size) decomposition.
    """

    def __init__(self, g: Grammar, w: Sequence[str]):
        self.g = g
        self.w = tuple(w)
        self.rules = g.rules
        self.tops = lru_cache(maxsize=None)(self._tops)

    def _leaf_cats(self, i: int, j: int) -> tuple[Category, ...]:
        if i == j:
            return self.g.epsilon_categories
        if j == i + 1:
            return self.g.by_word.get(self.w[i], ())
        return ()

    def _splits(self, i: int, j: int, size: int):
        for k in range(i, j + 1):
            for s1 in range(1, size - 1, 2):
                yield k, s1, size - 1 - s1

    def _tops(self, i: int, j: int, size: int) -> frozenset[Category]:
        """Categories with a derivation of exactly ``size`` nodes over w[i:j]."""
        if size == 1:
            return frozenset(self._leaf_cats(i, j))
        out = set()
        for k, s1, s2 in self._splits(i, j, size):
            lefts = self.tops(i, k, s1)
            if not lefts:
                continue
            rights = self.tops(k, j, s2)
            for lc in lefts:
                for rc in rights:
                    for r in self.rules:
                        res = apply_rule(r, lc, rc)
                        if res is not None:
                            out.add(res)
        return frozenset(out)

    def trees(self, i: int, j: int, size: int, cat: Category) -> Iterator[Tree]:
        if size == 1:
            word = None if i == j else self.w[i]
            if cat in self._leaf_cats(i, j):
                yield Leaf(LexEntry(word, cat))
            return
        for k, s1, s2 in self._splits(i, j, size):
            for lc in sorted(self.tops(i, k, s1), key=render_category):
                rights = self.tops(k, j, s2)
                for rc in sorted(rights, key=render_category):
                    for rid, r in enumerate(self.rules):
                        if apply_rule(r, lc, rc) is cat:
                            for lt in self.trees(i, k, s1, lc):
                                for rt in self.trees(k, j, s2, rc):
                                    yield Node(cat, rid, lt, rt)

    def derives(self, node_cap: int, cat: Category | None = None) -> bool:
        cat = cat if cat is not None else Category(self.g.start)
        n = len(self.w)
        return any(cat in self.tops(0, n, s) for s in range(1, node_cap + 1, 2))

    def all_trees(self, node_cap: int, cat: Category | None = None) -> Iterator[Tree]:
        cat = cat if cat is not None else Category(self.g.start)
        n = len(self.w)
        for s in range(1, node_cap + 1, 2):
            if cat in self.tops(0, n, s):
                yield from self.trees(0, n, s, cat)


def enumerate_derivations(g: Grammar, w: Sequence[str], node_cap: int, limit: int | None = None) -> list[Tree]:
    """Every derivation of the start category over ``w`` with at most ``node_cap`` nodes.

    For epsilon-free grammars and ``node_cap >= 2|w| - 1`` the result is complete.
    """
    if node_cap < 1:
        raise ValueError("node_cap must be at least 1")
    out = []
    for t in Enumerator(g, w).all_trees(node_cap):
        out.append(t)
        if limit is not None and len(out) >= limit:
            break
    return out


def derives_by_enumeration(g: Grammar, w: Sequence[str], node_cap: int) -> bool:
    if node_cap < 1:
        raise ValueError("node_cap must be at least 1")
    return Enumerator(g, w).derives(node_cap)


def to_dot(t: Tree) -> str:
    """Graphviz rendering, nodes numbered in pre-order."""
    lines = ["digraph derivation {", "  node [shape=plaintext];"]
    ids: dict[tuple[int, ...], int] = {}
    for path, n in iter_nodes(t):
        k = ids[path] = len(ids)
        if isinstance(n, Leaf):
            label = f"{n.entry.category}\\n{n.entry.word if n.entry.word is not None else 'ε'}"
        else:
            label = f"{n.category}\\n[rule {n.rule}]"
        lines.append(f'  n{k} [label="{label}"];')
        if path:
            lines.append(f"  n{ids[path[:-1]]} -> n{k};")
    lines.append("}")
    return "\n".join(lines) + "\n"
