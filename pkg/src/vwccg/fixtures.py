"""Bundled grammar fixtures."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .grammar import Grammar, parse_grammar

NAMES = ("theorems", "rivaldo_free", "rivaldo_restricted", "ab_eps", "mixed", "compose")


def fixture_text(name: str) -> str:
    return resources.files("vwccg").joinpath("data", f"{name}.ccg").read_text()


def load_fixture(name: str) -> Grammar:
    return parse_grammar(fixture_text(name))


def data_text(filename: str) -> str:
    return resources.files("vwccg").joinpath("data", filename).read_text()


def read_input_file(path: str) -> str:
    """Read ``path``; fall back to a bundled data file of the same name."""
    p = Path(path)
    if p.exists():
        return p.read_text()
    try:
        return data_text(p.name)
    except (FileNotFoundError, IsADirectoryError):
        raise FileNotFoundError(f"no such file: {path}") from None
