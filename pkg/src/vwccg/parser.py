"""Agenda-based chart parser with an arity cap.

Items are ``[X, i, j]``. Lexical items seed ``[X, i, i+1]``; entries for the
empty string seed ``[X, i, i]`` at every position. Each popped item is
combined with every already-processed adjacent item, so each pair of items is
tried once, when the later of the two leaves the agenda. Outputs whose arity
exceeds the cap are dropped and recorded in ``cap_hit``.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .category import BWD, FWD, Category
from .derivation import Leaf, Node, Tree
from .grammar import Grammar, LexEntry, grammar_stats, match_rule


class ParseError(Exception):
    pass


class UnknownTokenError(ParseError):
    def __init__(self, token: str, position: int):
        super().__init__(f"token {token!r} at position {position} is not in the vocabulary")
        self.token = token
        self.position = position


class BudgetExceeded(ParseError):
    def __init__(self, items: int):
        super().__init__(f"item budget exhausted after {items} items")
        self.items = items


class ChartItem(NamedTuple):
    category: Category
    i: int
    j: int


@dataclass
class ParseConfig:
    arity_cap: int | None = None
    max_items: int | None = None
    # optional predicate on derived categories; rejected outputs are never added
    item_filter: Callable[[Category], bool] | None = None


@dataclass
class ParseResult:
    accepted: bool
    items_created: int
    derivation: Tree | None = None
    cap_hit: bool = False
    arity_cap: int = 0
    chart: "Chart | None" = field(default=None, repr=False)


def default_arity_cap(g: Grammar, n: int) -> int:
    """Largest arity a chart category can reach in an epsilon-free derivation of length n."""
    st = grammar_stats(g)
    return st.gamma + st.dmax * max(n - 1, 0)


class _RuleIndex:
    """Rules grouped by schema and degree, filtered by the Y restriction."""

    def __init__(self, g: Grammar):
        self.generic: dict = defaultdict(list)
        self.specific: dict = defaultdict(list)
        for rid, r in enumerate(g.rules):
            if r.y_constraint is None:
                self.generic[r.schema, r.degree].append((rid, r))
            else:
                for y in r.y_constraint:
                    self.specific[r.schema, r.degree, y].append((rid, r))
        self.fwd_degrees = tuple(sorted({d for (s, d) in self._keys() if s is FWD}))
        self.bwd_degrees = tuple(sorted({d for (s, d) in self._keys() if s is BWD}))
        self.degrees = tuple(sorted(set(self.fwd_degrees) | set(self.bwd_degrees)))
        self._cache: dict = {}

    def _keys(self):
        yield from self.generic
        for s, d, _ in self.specific:
            yield s, d

    def lookup(self, schema, degree: int, y: Category):
        key = (schema, degree, y)
        hit = self._cache.get(key)
        if hit is None:
            hit = sorted(self.generic.get((schema, degree), []) + self.specific.get(key, []), key=lambda p: p[0])
            self._cache[key] = hit
        return hit


class Chart:
    def __init__(self, g: Grammar, w: Sequence[str], cfg: ParseConfig | None = None):
        cfg = cfg or ParseConfig()
        self.g = g
        self.w = tuple(w)
        for pos, tok in enumerate(self.w):
            if tok not in g.vocabulary:
                raise UnknownTokenError(tok, pos)
        if cfg.arity_cap is not None:
            self.cap = cfg.arity_cap
        elif g.lexicon:
            self.cap = default_arity_cap(g, len(self.w))
        else:
            self.cap = 0
        self.max_items = cfg.max_items
        self.item_filter = cfg.item_filter
        self.rules = _RuleIndex(g)
        self.items: list[ChartItem] = []
        self.index: dict[ChartItem, int] = {}
        # backpointer per item: LexEntry for seeds, (rule, left, right) otherwise
        self.back: list = []
        self.cap_hit = False
        self.agenda: deque[int] = deque()
        self.fprim_end: dict = defaultdict(list)  # (j, Y) -> items ending at j with top /Y
        self.bprim_start: dict = defaultdict(list)  # (i, Y) -> items starting at i with top \Y
        self.sec_start: dict = defaultdict(list)  # (i, d, base) -> items starting at i
        self.sec_end: dict = defaultdict(list)  # (j, d, base) -> items ending at j

    # -- bookkeeping ----------------------------------------------------------

    def _add(self, item: ChartItem, back) -> None:
        if item in self.index:
            return
        if self.max_items is not None and len(self.items) >= self.max_items:
            raise BudgetExceeded(len(self.items))
        self.index[item] = len(self.items)
        self.items.append(item)
        self.back.append(back)
        self.agenda.append(self.index[item])

    def _offer(self, cat: Category, i: int, j: int, rid: int, left: int, right: int) -> None:
        if len(cat.args) > self.cap:
            self.cap_hit = True
            return
        if self.item_filter is not None and not self.item_filter(cat):
            return
        self._add(ChartItem(cat, i, j), (rid, left, right))

    def _register(self, idx: int) -> None:
        cat, i, j = self.items[idx]
        args = cat.args
        if args:
            t = args[-1]
            if t.slash is FWD:
                self.fprim_end[j, t.category].append(idx)
            else:
                self.bprim_start[i, t.category].append(idx)
        for d in self.rules.degrees:
            if len(args) < d:
                break
            base = Category(cat.target, args[: len(args) - d]) if d else cat
            if d in self.rules.fwd_degrees:
                self.sec_start[i, d, base].append(idx)
            if d in self.rules.bwd_degrees:
                self.sec_end[j, d, base].append(idx)

    # -- main loop ---------------------------------------------------------------

    def seed(self) -> None:
        eps = self.g.epsilon_categories
        n = len(self.w)
        for pos in range(n + 1):
            for c in eps:
                self._add(ChartItem(c, pos, pos), LexEntry(None, c))
            if pos < n:
                word = self.w[pos]
                for c in self.g.by_word.get(word, ()):
                    self._add(ChartItem(c, pos, pos + 1), LexEntry(word, c))

    def saturate(self) -> None:
        rules = self.rules
        items = self.items
        while self.agenda:
            idx = self.agenda.popleft()
            self._register(idx)
            cat, i, j = items[idx]
            args = cat.args
            top = args[-1] if args else None
            # as primary of a forward rule: [cat, i, j] [R, j, l]
            if top is not None and top.slash is FWD:
                y = top.category
                for d in rules.fwd_degrees:
                    cand = rules.lookup(FWD, d, y)
                    if not cand:
                        continue
                    for sidx in self.sec_start.get((j, d, y), ()):
                        rcat, _, l = items[sidx]
                        for rid, r in cand:
                            out = match_rule(r, cat, rcat)
                            if out is not None:
                                self._offer(out, i, l, rid, idx, sidx)
            # as primary of a backward rule: [L, h, i] [cat, i, j]
            if top is not None and top.slash is BWD:
                y = top.category
                for d in rules.bwd_degrees:
                    cand = rules.lookup(BWD, d, y)
                    if not cand:
                        continue
                    for sidx in self.sec_end.get((i, d, y), ()):
                        lcat, h, _ = items[sidx]
                        for rid, r in cand:
                            out = match_rule(r, cat, lcat)
                            if out is not None:
                                self._offer(out, h, j, rid, sidx, idx)
            # as secondary input: split off the top d arguments
            for d in rules.degrees:
                if len(args) < d:
                    break
                base = Category(cat.target, args[: len(args) - d]) if d else cat
                if d in rules.fwd_degrees:
                    cand = rules.lookup(FWD, d, base)
                    if cand:
                        for pidx in self.fprim_end.get((i, base), ()):
                            pcat, h, _ = items[pidx]
                            for rid, r in cand:
                                out = match_rule(r, pcat, cat)
                                if out is not None:
                                    self._offer(out, h, j, rid, pidx, idx)
                if d in rules.bwd_degrees:
                    cand = rules.lookup(BWD, d, base)
                    if cand:
                        for pidx in self.bprim_start.get((j, base), ()):
                            pcat, _, l = items[pidx]
                            for rid, r in cand:
                                out = match_rule(r, pcat, cat)
                                if out is not None:
                                    self._offer(out, i, l, rid, idx, pidx)

    # -- queries ---------------------------------------------------------------

    def has(self, cat: Category, i: int, j: int) -> bool:
        return ChartItem(cat, i, j) in self.index

    def categories(self, i: int, j: int) -> set[Category]:
        return {c for (c, a, b) in self.items if a == i and b == j}

    def derivation(self, cat: Category, i: int, j: int) -> Tree | None:
        idx = self.index.get(ChartItem(cat, i, j))
        if idx is None:
            return None
        return self._extract(idx)

    def _extract(self, idx: int) -> Tree:
        memo: dict[int, Tree] = {}
        stack = [idx]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            back = self.back[k]
            if isinstance(back, LexEntry):
                memo[k] = Leaf(back)
                stack.pop()
                continue
            rid, left, right = back
            pending = [c for c in (left, right) if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            memo[k] = Node(self.items[k].category, rid, memo[left], memo[right])
            stack.pop()
        return memo[idx]


def _run(g: Grammar, w: Sequence[str], cfg: ParseConfig | None) -> Chart:
    chart = Chart(g, w, cfg)
    chart.seed()
    chart.saturate()
    return chart


def recognize(g: Grammar, w: Sequence[str], cfg: ParseConfig | None = None) -> ParseResult:
    chart = _run(g, w, cfg)
    accepted = chart.has(Category(g.start), 0, len(chart.w))
    return ParseResult(accepted, len(chart.items), None, chart.cap_hit, chart.cap, chart)


def parse(g: Grammar, w: Sequence[str], cfg: ParseConfig | None = None) -> ParseResult:
    res = recognize(g, w, cfg)
    if res.accepted:
        res.derivation = res.chart.derivation(Category(g.start), 0, len(res.chart.w))
    return res


def saturate_empty(g: Grammar, cfg: ParseConfig | None = None) -> set[Category]:
    """Every category derivable from the empty string under the cap."""
    chart = _run(g, (), cfg)
    return chart.categories(0, 0)
