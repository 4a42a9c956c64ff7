"""Term generators: seeded random terms and exhaustive enumeration by size."""

from __future__ import annotations

import random
from typing import Iterator

from maxmam.terms import Abs, App, Name, Term, Var

FREE_NAMES = ("a", "b", "c", "d")
BINDER_NAMES = ("x", "y", "z", "u", "v", "w")


def random_term(
    rng: random.Random,
    size: int,
    *,
    free_names=FREE_NAMES,
    p_free: float = 0.15,
    p_abs: float = 0.3,
    p_redex: float = 0.5,
) -> Term:
    """A random term of exactly ``size`` nodes.

    Applications get an abstraction on the left with probability
    ``p_redex`` so that redexes (erasing ones included) are common.  Binder
    names are drawn from a small pool, so shadowing happens; callers that
    need well-named terms pass the result through ``well_name``.
    """
    if size < 1:
        raise ValueError("size must be positive")

    def var(scope):
        if scope and (not free_names or rng.random() >= p_free):
            return Var(rng.choice(scope))
        return Var(Name(rng.choice(free_names)))

    def lam(n, scope):
        x = Name(rng.choice(BINDER_NAMES))
        return Abs(x, gen(n - 1, scope + [x]))

    def gen(n, scope):
        if n == 1:
            return var(scope)
        if n == 2:
            return lam(2, scope)
        if rng.random() < p_abs:
            return lam(n, scope)
        k = rng.randint(1, n - 2)
        if k >= 2 and rng.random() < p_redex:
            left = lam(k, scope)
        else:
            left = gen(k, scope)
        return App(left, gen(n - 1 - k, scope))

    return gen(size, [])


def random_sized_term(rng: random.Random, max_size: int, **kw) -> Term:
    return random_term(rng, rng.randint(1, max_size), **kw)


def enumerate_terms(size: int, *, max_free: int | None = None) -> Iterator[Term]:
    """Every well-named term of exactly ``size`` nodes, once per alpha-class.

    Binders are named ``x#k`` by preorder position; free variables are
    ``f0, f1, ...`` in order of first occurrence, so terms differing only by
    a renaming of free names are enumerated once.
    """
    if max_free is None:
        max_free = size

    def gen(n, scope, nfree, nbind):
        # yields (term, nfree, nbind)
        if n == 1:
            for x in scope:
                yield Var(x), nfree, nbind
            for i in range(min(nfree + 1, max_free)):
                yield Var(Name(f"f{i}")), max(nfree, i + 1), nbind
            return
        x = Name("x", nbind + 1)
        for body, nf, nb in gen(n - 1, scope + [x], nfree, nbind + 1):
            yield Abs(x, body), nf, nb
        for k in range(1, n - 1):
            for left, nf, nb in gen(k, scope, nfree, nbind):
                for right, nf2, nb2 in gen(n - 1 - k, scope, nf, nb):
                    yield App(left, right), nf2, nb2

    for t, _, _ in gen(size, [], 0, 0):
        yield t
