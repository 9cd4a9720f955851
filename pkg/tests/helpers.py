"""Shared hypothesis strategies and small fixtures for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from vwccg.category import BWD, FWD, Category
from vwccg.derivation import Leaf, Node
from vwccg.grammar import LexEntry

ATOMS = ["S", "NP", "N", "A", "B", "Shat", "cent", "v1T", "c0", "q_x"]

slashes = st.sampled_from([FWD, BWD])


def categories(max_arity: int = 6):
    def extend(children):
        return st.builds(
            lambda t, args: Category(t, args),
            st.sampled_from(ATOMS),
            st.lists(st.tuples(slashes, children), min_size=1, max_size=max_arity),
        )

    return st.recursive(st.sampled_from(ATOMS).map(Category), extend, max_leaves=12)


words = st.one_of(st.none(), st.sampled_from(["a", "b", "We", "prove", "c0"]))


def trees():
    leaf = st.builds(lambda w, c: Leaf(LexEntry(w, c)), words, categories())
    return st.recursive(
        leaf,
        lambda kids: st.builds(Node, categories(), st.integers(0, 30), kids, kids),
        max_leaves=10,
    )
