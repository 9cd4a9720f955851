"""Categories as stacks: an atomic target plus an ordered argument stack.

``A /1 X1 ... /m Xm`` is stored as ``Category("A", ((/, X1), ..., (/, Xm)))``;
the last argument is the top of the stack. Instances are interned, so two
structurally equal categories are the same object and ``==`` is identity.
"""

from __future__ import annotations

import re
import threading
from enum import Enum
from typing import NamedTuple, Sequence

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_.+;-]*")


class Slash(Enum):
    FORWARD = "/"
    BACKWARD = "\\"

    def __str__(self) -> str:
        return self.value


FWD = Slash.FORWARD
BWD = Slash.BACKWARD


class CategorySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class Argument(NamedTuple):
    slash: Slash
    category: "Category"

    def __str__(self) -> str:
        return f"{self.slash.value}{_render_operand(self.category)}"


class Category:
    __slots__ = ("target", "args", "_hash", "__weakref__")

    _table: dict = {}
    _lock = threading.Lock()

    target: str
    args: tuple[Argument, ...]

    def __new__(cls, target: str, args: Sequence[Argument | tuple] = ()):
        args = tuple(a if isinstance(a, Argument) else Argument(*a) for a in args)
        key = (target, args)
        obj = cls._table.get(key)
        if obj is not None:
            return obj
        if not isinstance(target, str) or not ATOM_RE.fullmatch(target):
            raise ValueError(f"illegal atom name {target!r}")
        for a in args:
            if not isinstance(a.slash, Slash) or not isinstance(a.category, Category):
                raise TypeError(f"malformed argument {a!r}")
        with cls._lock:
            obj = cls._table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                object.__setattr__(obj, "target", target)
                object.__setattr__(obj, "args", args)
                object.__setattr__(obj, "_hash", hash(key))
                cls._table[key] = obj
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Category is immutable")

    def __reduce__(self):
        return (Category, (self.target, self.args))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __ne__(self, other) -> bool:
        return self is not other

    def __repr__(self) -> str:
        return f"Category({render_category(self)!r})"

    def __str__(self) -> str:
        return render_category(self)

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_atomic(self) -> bool:
        return not self.args

    @property
    def top(self) -> Argument | None:
        return self.args[-1] if self.args else None

    def size(self) -> int:
        """Node count of the syntax tree: every atom and every slash counts one."""
        return 1 + sum(1 + a.category.size() for a in self.args)

    def atoms(self) -> set[str]:
        out = {self.target}
        for a in self.args:
            out |= a.category.atoms()
        return out

    def push(self, *args: Argument | tuple) -> Category:
        return Category(self.target, self.args + tuple(Argument(*a) for a in args))

    def pop(self) -> Category:
        if not self.args:
            raise ValueError(f"cannot pop from atomic category {self}")
        return Category(self.target, self.args[:-1])


def atom(name: str) -> Category:
    return Category(name, ())


def arity(c: Category) -> int:
    return len(c.args)


def split_top(c: Category, d: int) -> tuple[Category, tuple[Argument, ...]] | None:
    """Split off the top ``d`` arguments; ``None`` when arity is below ``d``."""
    if d == 0:
        return c, ()
    if len(c.args) < d:
        return None
    return Category(c.target, c.args[:-d]), c.args[-d:]


def _render_operand(c: Category) -> str:
    return c.target if not c.args else f"({render_category(c)})"


def render_category(c: Category) -> str:
    return c.target + "".join(str(a) for a in c.args)


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<atom>[A-Za-z][A-Za-z0-9_.+;-]*)|(?P<op>[/\\()])|(?P<bad>\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        if m.group("bad") is not None:
            raise CategorySyntaxError(f"illegal character {m.group('bad')!r}", text, m.start("bad"))
        if m.group("atom") is not None:
            tokens.append(("atom", m.group("atom"), m.start("atom")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str):
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        raise CategorySyntaxError(message, self.text, pos)

    def expr(self) -> Category:
        result = self.operand()
        while True:
            tok = self.peek()
            if tok is None or tok[1] not in ("/", "\\"):
                return result
            self.i += 1
            slash = Slash(tok[1])
            result = result.push((slash, self.operand()))

    def operand(self) -> Category:
        tok = self.peek()
        if tok is None:
            self.error("expected a category")
        kind, value, _ = tok
        if kind == "atom":
            self.i += 1
            return atom(value)
        if value == "(":
            self.i += 1
            inner = self.expr()
            if self.peek() is None or self.peek()[1] != ")":
                self.error("unbalanced parenthesis, expected ')'")
            self.i += 1
            return inner
        self.error(f"unexpected {value!r}")


def parse_category(text: str) -> Category:
    """Parse ``text`` with left-associative slashes; parentheses group arguments."""
    p = _Parser(text)
    result = p.expr()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek()[1]!r}")
    return result


cat = parse_category
