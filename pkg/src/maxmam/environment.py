"""Labelled global environments and their unfolding.

An environment is a stack of delayed substitutions ``[x<-t]^l :: E``, newest
first.  It only ever grows at the head, so it is stored as an append-only
table shared between all environments that extend one another; an
``Environment`` value is a view of the first ``len`` rows.  Lookup is a dict
access, matching the random-access store the machines assume.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from maxmam.terms import (
    HOLE,
    Abs,
    App,
    CAbs,
    CAppL,
    CAppR,
    Context,
    Hole,
    Name,
    Term,
    Var,
    as_name,
    graft,
)


@dataclass(frozen=True)
class Label:
    """Usefulness label: ``abs``, ``neu`` or ``red n`` (``n >= 1``)."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("abs", "neu", "red"):
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind == "red" and self.n < 1:
            raise ValueError("red label needs n >= 1")
        if self.kind != "red" and self.n != 0:
            raise ValueError(f"{self.kind} label takes no number")

    @classmethod
    def red(cls, n: int) -> "Label":
        return cls("red", n)

    @classmethod
    def parse(cls, text: str) -> "Label":
        parts = text.split()
        if len(parts) == 1 and parts[0] in ("abs", "neu"):
            return cls(parts[0])
        if len(parts) == 2 and parts[0] == "red" and parts[1].isdigit():
            return cls("red", int(parts[1]))
        raise ValueError(f"bad label {text!r}")

    @property
    def is_red(self) -> bool:
        return self.kind == "red"

    def __str__(self) -> str:
        return f"red {self.n}" if self.kind == "red" else self.kind


ABS = Label("abs")
NEU = Label("neu")


class Entry(NamedTuple):
    var: Name
    code: Term
    label: Label


class _Store:
    __slots__ = ("vars", "codes", "labels", "index", "unfolded", "checked")

    def __init__(self):
        self.vars: list = []
        self.codes: list = []
        self.labels: list = []
        self.index: dict = {}  # var -> ascending positions
        self.unfolded: dict = {}  # position -> code unfolded by its tail
        self.checked = 0  # rows already verified well-labeled


class Environment:
    """Immutable view over a shared append-only store."""

    __slots__ = ("_store", "_len")

    def __init__(self, _store: _Store | None = None, _len: int = 0):
        self._store = _Store() if _store is None else _store
        self._len = _len

    @classmethod
    def from_entries(cls, entries: Iterable) -> "Environment":
        """Build from ``(var, code, label)`` triples listed newest first."""
        env = cls()
        for var, code, label in reversed(list(entries)):
            env = env.extend(var, code, label)
        return env

    def extend(self, var, code: Term, label: Label) -> "Environment":
        """``[var<-code]^label :: self``."""
        var = as_name(var)
        st = self._store
        if self._len != len(st.vars):
            # someone else already extended this view; fork a private copy
            st = _Store()
            for i in range(self._len):
                _append(st, self._store.vars[i], self._store.codes[i], self._store.labels[i])
            st.unfolded = {k: v for k, v in self._store.unfolded.items() if k < self._len}
            st.checked = min(self._store.checked, self._len)
        _append(st, var, code, label)
        return Environment(st, self._len + 1)

    def __len__(self) -> int:
        return self._len

    def position(self, x: Name, limit: int | None = None) -> int | None:
        """Row of the newest entry for ``x`` among rows ``< limit``."""
        rows = self._store.index.get(x)
        if not rows:
            return None
        lim = self._len if limit is None else min(limit, self._len)
        if rows[0] >= lim:
            return None
        if len(rows) == 1:
            return rows[0]
        return rows[bisect.bisect_left(rows, lim) - 1]

    def lookup(self, x: Name) -> Entry | None:
        p = self.position(x)
        return None if p is None else self.row(p)

    def __contains__(self, x) -> bool:
        return self.position(x) is not None

    def row(self, p: int) -> Entry:
        st = self._store
        return Entry(st.vars[p], st.codes[p], st.labels[p])

    def entries(self) -> list:
        """Entries newest first, i.e. in ``[x<-t]^l :: E`` order."""
        return [self.row(p) for p in range(self._len - 1, -1, -1)]

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries())

    def tail(self, k: int = 1) -> "Environment":
        """Drop the ``k`` newest entries."""
        return Environment(self._store, max(self._len - k, 0))

    def prefix(self, p: int) -> "Environment":
        """The tail strictly below row ``p`` (what row ``p`` was added onto)."""
        return Environment(self._store, min(p, self._len))

    def var_names(self) -> set:
        return {self._store.vars[p] for p in range(self._len)}

    def names(self) -> set:
        """Every name occurring in the environment, variables and codes."""
        st = self._store
        out = set()
        for p in range(self._len):
            out.add(st.vars[p])
            out |= st.codes[p].names
        return out

    def unfolded_row(self, p: int) -> Term:
        st = self._store
        t = st.unfolded.get(p)
        if t is None:
            t = _unfold(st.codes[p], self, p)
            st.unfolded[p] = t
        return t

    def __eq__(self, other) -> bool:
        if not isinstance(other, Environment):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(tuple(self.entries()))

    def __repr__(self) -> str:
        inner = " :: ".join(f"[{e.var}<-{e.code}]^{e.label}" for e in self.entries())
        return f"Environment({inner or 'ε'})"


def _append(st: _Store, var: Name, code: Term, label: Label) -> None:
    st.index.setdefault(var, []).append(len(st.vars))
    st.vars.append(var)
    st.codes.append(code)
    st.labels.append(label)


EMPTY_ENV = Environment()


def _unfold(t: Term, env: Environment, limit: int) -> Term:
    """Unfold rows ``< limit`` of ``env`` on ``t``."""
    if limit <= 0 or t.names.isdisjoint(env._store.index):
        return t
    if type(t) is Var:
        p = env.position(t.name, limit)
        return t if p is None else env.unfolded_row(p)
    if type(t) is Abs:
        body = _unfold(t.body, env, limit)
        return t if body is t.body else Abs(t.binder, body)
    left = _unfold(t.left, env, limit)
    right = _unfold(t.right, env, limit)
    if left is t.left and right is t.right:
        return t
    return App(left, right)


def unfold(t: Term, env) -> Term:
    """Graft every entry of ``env`` on ``t``, newest entry first.

    ``env`` may be an ``Environment`` or a newest-first list of
    ``(var, code, label)`` triples.
    """
    if not isinstance(env, Environment):
        env = Environment.from_entries(env)
    return _unfold(t, env, len(env))


def unfold_by_grafting(t: Term, env) -> Term:
    """Reference definition: fold grafting over the entries, newest first."""
    if isinstance(env, Environment):
        env = env.entries()
    for var, code, _ in env:
        t = graft(t, var, code)
    return t


def unfold_context(c: Context, env) -> Context:
    if not isinstance(env, Environment):
        env = Environment.from_entries(env)
    layers = []
    while type(c) is not Hole:
        layers.append(c)
        c = c.inner
    out: Context = HOLE
    for c in reversed(layers):
        if type(c) is CAbs:
            out = CAbs(c.binder, out)
        elif type(c) is CAppL:
            out = CAppL(out, unfold(c.arg, env))
        else:
            out = CAppR(unfold(c.fun, env), out)
    return out
