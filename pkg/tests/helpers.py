"""Shared strategies, seeded corpora and brute-force reference reducers."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from maxmam.generators import random_sized_term
from maxmam.oracle import contract, is_max_context
from maxmam.terms import Abs, App, Name, Var, is_max_redex, is_redex, plug, positions, well_name

FREE = [Name(c) for c in "abc"]
BOUND = [Name(c) for c in "xyz"]
NAMES = FREE + BOUND


def terms(max_leaves: int = 12):
    """Raw terms over a tiny name pool, so shadowing and capture are common."""
    var = st.sampled_from(NAMES).map(Var)
    return st.recursive(
        var,
        lambda sub: st.one_of(
            st.builds(Abs, st.sampled_from(BOUND), sub),
            st.builds(App, sub, sub),
        ),
        max_leaves=max_leaves,
    )


def codes(max_leaves: int = 12):
    return terms(max_leaves).map(well_name)


def corpus(seed: int, count: int, max_size: int, *, named: bool = False) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        t = random_sized_term(rng, max_size)
        out.append(well_name(t) if named else t)
    return out


def brute_force_max_redexes(t) -> list:
    """Every redex position passing the max-context test and the root rule."""
    return [(c, r) for c, r in positions(t) if is_redex(r) and is_max_redex(r) and is_max_context(c)]


def leftmost_outermost_step(t):
    """One normal-order step, used only to exhibit normal forms the maximal
    strategy never reaches."""
    if type(t) is App:
        if type(t.left) is Abs:
            return contract(t)
        left = leftmost_outermost_step(t.left)
        if left is not None:
            return App(left, t.right)
        right = leftmost_outermost_step(t.right)
        return None if right is None else App(t.left, right)
    if type(t) is Abs:
        body = leftmost_outermost_step(t.body)
        return None if body is None else Abs(t.binder, body)
    return None


def leftmost_outermost(t, fuel: int):
    for _ in range(fuel):
        nxt = leftmost_outermost_step(t)
        if nxt is None:
            return t
        t = nxt
    return None


def plug_contract(c, r):
    return plug(c, contract(r))
