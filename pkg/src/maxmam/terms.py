"""Lambda-term syntax, naming discipline and substitutions.

Terms are immutable trees.  Every node caches its size, its free variables,
the set of all names occurring in it (binders included) and whether it is
beta-normal, so membership tests such as ``x in t.fv`` and ``t.normal`` are
constant time once the term is built.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple


class Name(NamedTuple):
    """A variable name: ``base`` plus a freshness index (0 = as written)."""

    base: str
    index: int = 0

    def __str__(self) -> str:
        return self.base if self.index == 0 else f"{self.base}#{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Name":
        base, sep, idx = text.partition("#")
        return cls(base, int(idx) if sep else 0)


def as_name(x) -> Name:
    if isinstance(x, Name):
        return x
    return Name.parse(x)


class Term:
    __slots__ = ("size", "fv", "names", "normal", "_hash")

    size: int
    fv: frozenset
    names: frozenset
    normal: bool

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        # iterative to survive very deep terms
        todo = [(self, other)]
        while todo:
            a, b = todo.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a._hash != b._hash or a.size != b.size:
                return False
            if type(a) is Var:
                if a.name != b.name:
                    return False
            elif type(a) is Abs:
                if a.binder != b.binder:
                    return False
                todo.append((a.body, b.body))
            else:
                todo.append((a.left, b.left))
                todo.append((a.right, b.right))
        return True

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    @property
    def neutral(self) -> bool:
        return self.normal and type(self) is not Abs

    def __str__(self) -> str:
        from maxmam.syntax import pretty

        return pretty(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{self}>"


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        name = as_name(name)
        self.name = name
        self.size = 1
        self.fv = frozenset((name,))
        self.names = self.fv
        self.normal = True
        self._hash = hash(("v", name))


class Abs(Term):
    __slots__ = ("binder", "body")

    def __init__(self, binder, body: Term):
        binder = as_name(binder)
        self.binder = binder
        self.body = body
        self.size = body.size + 1
        self.fv = body.fv - {binder} if binder in body.fv else body.fv
        self.names = body.names if binder in body.names else body.names | {binder}
        self.normal = body.normal
        self._hash = hash(("l", binder, body._hash))


class App(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self.size = left.size + right.size + 1
        self.fv = left.fv | right.fv
        self.names = left.names | right.names
        self.normal = left.normal and right.normal and type(left) is not Abs
        self._hash = hash(("a", left._hash, right._hash))


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


# -- basic observations -------------------------------------------------------


def free_vars(t: Term) -> frozenset:
    return t.fv


def size(t: Term) -> int:
    return t.size


def is_normal(t: Term) -> bool:
    return t.normal


def is_neutral(t: Term) -> bool:
    return t.normal and type(t) is not Abs


def is_redex(t: Term) -> bool:
    return type(t) is App and type(t.left) is Abs


def is_erasing_abs(t: Term) -> bool:
    return type(t) is Abs and t.binder not in t.body.fv


def is_max_redex(t: Term) -> bool:
    """True when ``t`` is a redex the maximal strategy may fire at top level."""
    if not is_redex(t):
        return False
    lam = t.left
    return lam.binder in lam.body.fv or t.right.normal


def binders(t: Term) -> list:
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if type(u) is Abs:
            out.append(u.binder)
            stack.append(u.body)
        elif type(u) is App:
            stack.append(u.right)
            stack.append(u.left)
    return out


def occurrences(x: Name, t: Term) -> int:
    """Number of free occurrences of ``x`` in ``t``."""
    if x not in t.fv:
        return 0
    if type(t) is Var:
        return 1
    if type(t) is Abs:
        return occurrences(x, t.body)
    return occurrences(x, t.left) + occurrences(x, t.right)


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if type(u) is Abs:
            stack.append(u.body)
        elif type(u) is App:
            stack.append(u.right)
            stack.append(u.left)


def max_index(names: Iterable[Name], base: str | None = None) -> int:
    m = 0
    for n in names:
        if (base is None or n.base == base) and n.index > m:
            m = n.index
    return m


# -- well-naming ---------------------------------------------------------------


class NameSupply:
    """Monotone source of fresh indices for one evaluation session.

    A fresh name is ``base#k`` with ``k`` strictly above every index the
    supply has observed, so it cannot clash with any name seen so far.
    """

    def __init__(self, start: int = 1):
        self.next_index = max(start, 1)

    def observe(self, names: Iterable[Name]) -> None:
        self.next_index = max(self.next_index, max_index(names) + 1)

    def fresh(self, base) -> Name:
        if isinstance(base, Name):
            base = base.base
        n = Name(base, self.next_index)
        self.next_index += 1
        return n


def is_well_named(t: Term) -> bool:
    """All binders pairwise distinct and disjoint from the free names."""
    seen = set(t.fv)
    for b in binders(t):
        if b in seen:
            return False
        seen.add(b)
    return True


def _rebind(t: Term, choose) -> Term:
    """Rebuild ``t`` choosing each binder's new name with ``choose(old)``.

    Free names are untouched; bound occurrences follow their binder.
    """

    def go(u: Term, ren: dict) -> Term:
        if type(u) is Var:
            return Var(ren[u.name]) if u.name in ren else u
        if type(u) is Abs:
            new = choose(u.binder)
            if new == u.binder and u.binder not in ren:
                body = go(u.body, ren)
            else:
                body = go(u.body, {**ren, u.binder: new})
            if new == u.binder and body is u.body:
                return u
            return Abs(new, body)
        left = go(u.left, ren)
        right = go(u.right, ren)
        if left is u.left and right is u.right:
            return u
        return App(left, right)

    return go(t, {})


def well_name(t: Term, reserved: Iterable[Name] = (), supply: NameSupply | None = None) -> Term:
    """Return an alpha-equivalent well-named term.

    Free names are kept verbatim; a binder keeps its name unless that name is
    already a free name, a reserved name or an earlier binder.
    """
    reserved = frozenset(reserved)
    if supply is None:
        supply = NameSupply()
    supply.observe(t.names)
    supply.observe(reserved)
    used = set(t.fv) | reserved

    def choose(old: Name) -> Name:
        new = old if old not in used else supply.fresh(old)
        used.add(new)
        return new

    return _rebind(t, choose)


def rename_fresh(code: Term, supply: NameSupply, forbidden: Iterable[Name] = ()) -> Term:
    """Alpha-rename every binder of ``code`` with a fresh name.

    The new bound names avoid ``forbidden`` and everything the supply has
    handed out or observed; free names are unchanged.
    """
    supply.observe(forbidden)
    return _rebind(code, supply.fresh)


# -- substitution ------------------------------------------------------------


def subst(t: Term, x: Name, s: Term) -> Term:
    """Capture-avoiding substitution ``t{x<-s}``.

    A binder is renamed only when it would capture a free name of ``s``; the
    new name takes the next unused index for that binder's base.
    """
    x = as_name(x)
    if x not in t.fv:
        return t
    if type(t) is Var:
        return s
    if type(t) is App:
        return App(subst(t.left, x, s), subst(t.right, x, s))
    y, body = t.binder, t.body
    if y in s.fv:
        z = Name(y.base, max_index(t.names | s.names, y.base) + 1)
        body = subst(body, y, Var(z))
        y = z
    return Abs(y, subst(body, x, s))


def graft(t: Term, x: Name, s: Term) -> Term:
    """Capture-allowing replacement of every occurrence of ``x`` by ``s``."""
    x = as_name(x)
    if x not in t.names:
        return t
    if type(t) is Var:
        return s if t.name == x else t
    if type(t) is Abs:
        return Abs(t.binder, graft(t.body, x, s))
    return App(graft(t.left, x, s), graft(t.right, x, s))


# -- alpha equivalence ---------------------------------------------------------


def _debruijn(t: Term) -> list:
    out = []
    depth_of: dict = {}
    # explicit stack of (term, undo-marker) so deep terms do not recurse
    stack: list = [(t, None)]
    depth = 0
    while stack:
        u, undo = stack.pop()
        if undo is not None:
            name, prev = undo
            depth -= 1
            if prev is None:
                del depth_of[name]
            else:
                depth_of[name] = prev
            continue
        if type(u) is Var:
            d = depth_of.get(u.name)
            out.append(("f", u.name) if d is None else ("b", depth - d))
        elif type(u) is Abs:
            out.append("L")
            prev = depth_of.get(u.binder)
            depth += 1
            depth_of[u.binder] = depth
            stack.append((None, (u.binder, prev)))
            stack.append((u.body, None))
        else:
            out.append("A")
            stack.append((u.right, None))
            stack.append((u.left, None))
    return out


def alpha_eq(t: Term, s: Term) -> bool:
    if t is s:
        return True
    if t.size != s.size or t.fv != s.fv:
        return False
    return _debruijn(t) == _debruijn(s)


def skeleton(t: Term) -> tuple:
    """Shape of ``t`` with every name erased (the star-erasure of a term)."""
    out = []
    for u in subterms(t):
        out.append("v" if type(u) is Var else ("l" if type(u) is Abs else "a"))
    return tuple(out)


# -- contexts ------------------------------------------------------------------


class Context:
    __slots__ = ()

    def __repr__(self) -> str:
        return f"{type(self).__name__}<{pretty_context(self)}>"


class Hole(Context):
    __slots__ = ()

    def __eq__(self, other):
        return type(other) is Hole

    def __hash__(self):
        return hash("hole")


HOLE = Hole()


class CAbs(Context):
    __slots__ = ("binder", "inner")

    def __init__(self, binder, inner: Context):
        self.binder = as_name(binder)
        self.inner = inner

    def __eq__(self, other):
        return type(other) is CAbs and self.binder == other.binder and self.inner == other.inner

    def __hash__(self):
        return hash(("cl", self.binder, self.inner))


class CAppL(Context):
    """``C t``: the hole is in the function position."""

    __slots__ = ("inner", "arg")

    def __init__(self, inner: Context, arg: Term):
        self.inner = inner
        self.arg = arg

    def __eq__(self, other):
        return type(other) is CAppL and self.arg == other.arg and self.inner == other.inner

    def __hash__(self):
        return hash(("cal", self.inner, self.arg))


class CAppR(Context):
    """``t C``: the hole is in the argument position."""

    __slots__ = ("fun", "inner")

    def __init__(self, fun: Term, inner: Context):
        self.fun = fun
        self.inner = inner

    def __eq__(self, other):
        return type(other) is CAppR and self.fun == other.fun and self.inner == other.inner

    def __hash__(self):
        return hash(("car", self.fun, self.inner))


def plug(c: Context, t: Term) -> Term:
    layers = []
    while type(c) is not Hole:
        layers.append(c)
        c = c.inner
    for c in reversed(layers):
        if type(c) is CAbs:
            t = Abs(c.binder, t)
        elif type(c) is CAppL:
            t = App(t, c.arg)
        else:
            t = App(c.fun, t)
    return t


def compose(outer: Context, inner: Context) -> Context:
    """``outer<inner>``."""
    if type(outer) is Hole:
        return inner
    if type(outer) is CAbs:
        return CAbs(outer.binder, compose(outer.inner, inner))
    if type(outer) is CAppL:
        return CAppL(compose(outer.inner, inner), outer.arg)
    return CAppR(outer.fun, compose(outer.inner, inner))


def is_applicative(c: Context) -> bool:
    """``C = D<<.> s>`` for some ``D`` and ``s``."""
    if type(c) is Hole:
        return False
    while type(c.inner) is not Hole:
        c = c.inner
    return type(c) is CAppL


def positions(t: Term) -> Iterator[tuple]:
    """Every decomposition ``t = C<u>`` as ``(C, u)`` pairs."""
    yield HOLE, t
    if type(t) is Abs:
        for c, u in positions(t.body):
            yield CAbs(t.binder, c), u
    elif type(t) is App:
        for c, u in positions(t.left):
            yield CAppL(c, t.right), u
        for c, u in positions(t.right):
            yield CAppR(t.left, c), u


def pretty_context(c: Context) -> str:
    from maxmam.syntax import pretty

    marker = Var(Name("<.>"))
    return pretty(plug(c, marker))
