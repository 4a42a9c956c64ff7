"""Reference implementation of the maximal strategy by direct rewriting.

The strategy is leftmost-outermost except on erasing redexes ``(\\x.p) r``
with ``x`` not free in ``p``: there the argument ``r`` is normalised first,
and the redex is fired only once ``r`` is normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from maxmam.terms import (
    HOLE,
    Abs,
    App,
    CAbs,
    CAppL,
    CAppR,
    Context,
    Hole,
    Term,
    plug,
    subst,
)

NORMAL = "normal"
FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass
class OracleResult:
    status: str
    final: Term
    steps: int
    trace: list | None = field(default=None, repr=False)

    @property
    def normal(self) -> bool:
        return self.status == NORMAL


def contract(redex: Term) -> Term:
    lam = redex.left
    return subst(lam.body, lam.binder, redex.right)


def max_step(t: Term) -> Term | None:
    """One step of the maximal strategy, or ``None`` on normal terms."""
    if t.normal:
        return None
    # walk down to the redex, remembering the spine, then rebuild
    path = []
    while True:
        if type(t) is Abs:
            path.append(("l", t.binder))
            t = t.body
            continue
        u, r = t.left, t.right
        if type(u) is Abs:
            if u.binder in u.body.fv or r.normal:
                t = contract(t)
                break
            path.append(("r", u))
            t = r
        elif not u.normal:
            path.append(("L", r))
            t = u
        else:
            path.append(("r", u))
            t = r
    for kind, item in reversed(path):
        if kind == "l":
            t = Abs(item, t)
        elif kind == "L":
            t = App(t, item)
        else:
            t = App(item, t)
    return t


def max_redex_position(t: Term) -> tuple | None:
    """Decompose ``t = C<r>`` with ``r`` the redex the strategy fires next."""
    if t.normal:
        return None
    layers = []
    while True:
        if type(t) is Abs:
            layers.append(("l", t.binder))
            t = t.body
            continue
        u, r = t.left, t.right
        if type(u) is Abs:
            if u.binder in u.body.fv or r.normal:
                break
            layers.append(("r", u))
            t = r
        elif not u.normal:
            layers.append(("L", r))
            t = u
        else:
            layers.append(("r", u))
            t = r
    c: Context = HOLE
    for kind, item in reversed(layers):
        if kind == "l":
            c = CAbs(item, c)
        elif kind == "L":
            c = CAppL(c, item)
        else:
            c = CAppR(item, c)
    return c, t


def is_max_context(c: Context) -> bool:
    """Derivability from the rules (ax), (@l), (λ), (gc) and (@r)."""
    while type(c) is not Hole:
        if type(c) is CAppL:
            if type(c.inner) is CAbs:
                return False
        elif type(c) is CAppR:
            f = c.fun
            erasing = type(f) is Abs and f.binder not in f.body.fv
            if not (erasing or f.neutral):
                return False
        c = c.inner
    return True


def max_reduce(t: Term, fuel: int, keep_trace: bool = False) -> OracleResult:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    trace = [t] if keep_trace else None
    steps = 0
    while steps < fuel:
        nxt = max_step(t)
        if nxt is None:
            return OracleResult(NORMAL, t, steps, trace)
        t = nxt
        steps += 1
        if trace is not None:
            trace.append(t)
    status = NORMAL if t.normal else FUEL_EXHAUSTED
    return OracleResult(status, t, steps, trace)


def plug_step(c: Context, redex: Term) -> Term:
    """Fire ``redex`` in place: ``C<r'>`` where ``r -> r'``."""
    return plug(c, contract(redex))

