"""State representation shared by the Checking AM and the Max MAM.

A state is ``(phase, frame, code, stack, env)``.  Frames and stacks are
persistent cons lists: ``()`` is empty and ``(head, tail)`` pushes ``head``.
States also carry ``fresh``, the next unused name index of the session, so
that stepping stays a pure function of the state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

from maxmam.environment import (
    EMPTY_ENV,
    Environment,
    Label,
    unfold,
    unfold_context,
)
from maxmam.oracle import is_max_context
from maxmam.syntax import pretty
from maxmam.terms import (
    HOLE,
    Abs,
    App,
    CAbs,
    CAppL,
    CAppR,
    Context,
    Name,
    Term,
    Var,
    binders,
    is_applicative,
    is_max_redex,
    is_redex,
    plug,
    positions,
    skeleton,
    subterms,
)


class Phase(enum.Enum):
    EVAL = "eval"
    BACK = "back"


EVAL = Phase.EVAL
BACK = Phase.BACK


class Transition(enum.Enum):
    C1 = "c1"
    C2 = "c2"
    C3 = "c3"
    C4 = "c4"
    C5 = "c5"
    C6 = "c6"
    C7 = "c7"
    M1 = "m1"
    M2 = "m2"
    M3 = "m3"
    E_RED = "e_red"
    E_ABS = "e_abs"
    O1 = "o1"
    O2 = "o2"
    O3 = "o3"
    O4 = "o4"
    O5 = "o5"
    O6 = "o6"

    @property
    def family(self) -> str:
        """``c``, ``m``, ``e`` or ``o``."""
        return self.value[0]

    def __str__(self) -> str:
        return self.value


COMMUTATIVE = frozenset(k for k in Transition if k.family == "c")
MULTIPLICATIVE = frozenset(k for k in Transition if k.family == "m")
EXPONENTIAL = frozenset(k for k in Transition if k.family == "e")
OUTPUT = frozenset(k for k in Transition if k.family == "o")


class VarItem(NamedTuple):
    var: Name


class HeadArg(NamedTuple):
    """``<t, pi>``: left part of an application whose argument is explored."""

    fun: Term
    stack: tuple


class ErasingRx(NamedTuple):
    """``<\\x.t, pi>^gc``: an erasing abstraction waiting for its argument."""

    abs: Term
    stack: tuple


# -- cons lists ---------------------------------------------------------------


def push(x, lst: tuple) -> tuple:
    return (x, lst)


def iter_cons(lst: tuple) -> Iterator:
    while lst:
        yield lst[0]
        lst = lst[1]


def cons_len(lst: tuple) -> int:
    n = 0
    while lst:
        n += 1
        lst = lst[1]
    return n


def from_list(items) -> tuple:
    """Cons list whose head is ``items[0]``."""
    out: tuple = ()
    for x in reversed(list(items)):
        out = (x, out)
    return out


class MachineState(NamedTuple):
    phase: Phase
    frame: tuple
    code: Term
    stack: tuple
    env: Environment
    fresh: int = 1

    def describe(self) -> str:
        ph = "▼" if self.phase is EVAL else "▲"
        st = ", ".join(pretty(c) for c in iter_cons(self.stack)) or "ε"
        return (
            f"({ph}, frame={cons_len(self.frame)}, code={pretty(self.code)}, "
            f"stack=[{st}], env={len(self.env)})"
        )


class Next(NamedTuple):
    """A non-final step of either machine."""

    state: MachineState
    kind: Transition


def trace_record(step: int, kind: Transition, s: MachineState) -> dict:
    return {
        "step": step,
        "kind": kind.value,
        "phase": s.phase.value,
        "code": pretty(s.code),
        "stack_depth": cons_len(s.stack),
        "frame_depth": cons_len(s.frame),
        "env_len": len(s.env),
    }


# -- decoding -----------------------------------------------------------------


def _stack_context(stack: tuple, inner: Context) -> Context:
    # the top of the stack is the innermost argument
    for arg in iter_cons(stack):
        inner = CAppL(inner, arg)
    return inner


def decode_raw_context(frame: tuple, stack: tuple) -> Context:
    """``F<pi<.>>`` without unfolding the environment."""
    c = _stack_context(stack, HOLE)
    for item in iter_cons(frame):
        if type(item) is VarItem:
            c = CAbs(item.var, c)
        else:
            c = _stack_context(item.stack, CAppR(item[0], c))
    return c


def decode_context(frame: tuple, stack: tuple, env: Environment) -> Context:
    return unfold_context(decode_raw_context(frame, stack), env)


def decode_raw(s: MachineState) -> Term:
    return plug(decode_raw_context(s.frame, s.stack), s.code)


def decode_state(s: MachineState) -> Term:
    return plug(decode_context(s.frame, s.stack, s.env), unfold(s.code, s.env))


# -- well-labeled environments ------------------------------------------------


def _row_well_labeled(env: Environment, p: int) -> bool:
    var, code, label = env.row(p)
    tail = env.prefix(p)
    if type(code) is Var:
        return False
    if var in code.names or var in tail.names():
        return False
    unfolded = env.unfolded_row(p)
    if label.kind == "abs":
        return type(code) is Abs and code.normal and unfolded.normal
    if label.kind == "neu":
        return type(code) is App and unfolded.neutral
    if unfolded.normal:
        return False
    return any(_red_witness(c, sub, label.n, tail) for c, sub in positions(code))


def _red_witness(c: Context, sub: Term, n: int, tail: Environment) -> bool:
    if n == 1:
        if not (is_redex(sub) and is_max_redex(unfold(sub, tail))):
            return False
    else:
        if type(sub) is not Var:
            return False
        entry = tail.lookup(sub.name)
        if entry is None:
            return False
        lab = entry.label
        if n > 2:
            if lab != Label.red(n - 1):
                return False
        elif not (lab == Label.red(1) or (lab.kind == "abs" and is_applicative(c))):
            return False
    return is_max_context(unfold_context(c, tail))


def is_well_labeled(env) -> bool:
    """Check every row of ``env`` against the environment below it."""
    if not isinstance(env, Environment):
        env = Environment.from_entries(env)
    st = env._store
    n = len(env)
    if st.checked >= n:
        return True
    for p in range(st.checked, n):
        if not _row_well_labeled(env, p):
            return False
        # rows below p are immutable, so the verdict can be cached
        st.checked = p + 1
    return True


# -- invariant suite ----------------------------------------------------------


class ViolationKind(enum.Enum):
    WELL_LABELED = "well_labeled"
    NORMAL_FORM = "normal_form"
    ERASING = "erasing"
    DECODING = "decoding"
    SUBTERM = "subterm"
    NAME = "name"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    where: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind.value} violation at {self.where}: {self.detail}"


@lru_cache(maxsize=64)
def _skeletons(t: Term) -> frozenset:
    return frozenset(skeleton(u) for u in subterms(t))


def _components(s: MachineState, include_code: bool) -> Iterator[tuple]:
    """``(path, code)`` for every code stored in the machine state."""
    if include_code:
        yield "code", s.code
    for i, c in enumerate(iter_cons(s.stack)):
        yield f"stack[{i}]", c
    for i, item in enumerate(iter_cons(s.frame)):
        if type(item) is VarItem:
            continue
        if type(item) is ErasingRx:
            yield f"frame[{i}].abs", item.abs
        for j, c in enumerate(iter_cons(item.stack)):
            yield f"frame[{i}].stack[{j}]", c


def assert_invariants(
    s: MachineState, initial: Term, *, env_subterms: bool = True
) -> list:
    """Collect violations of the machine invariants in state ``s``.

    ``initial`` is the code the run started from.  The Checking AM runs on
    environments built elsewhere, so it passes ``env_subterms=False``.
    """
    out: list = []
    env = s.env

    if not is_well_labeled(env):
        out.append(Violation(ViolationKind.WELL_LABELED, "env", repr(env)))

    if s.phase is BACK:
        u = unfold(s.code, env)
        if not u.normal:
            out.append(Violation(ViolationKind.NORMAL_FORM, "code", "backtracking on a non-normal code"))
        elif s.stack and not u.neutral:
            out.append(Violation(ViolationKind.NORMAL_FORM, "code", "non-neutral code with non-empty stack"))
    for i, item in enumerate(iter_cons(s.frame)):
        if type(item) is HeadArg and not unfold(item.fun, env).neutral:
            out.append(Violation(ViolationKind.NORMAL_FORM, f"frame[{i}]", "head context not neutral"))
        if type(item) is ErasingRx:
            lam = item.abs
            x = lam.binder
            if type(lam) is not Abs or x in lam.body.fv:
                out.append(Violation(ViolationKind.ERASING, f"frame[{i}]", "abstraction is not erasing"))
            elif x in env.names() or x in unfold(lam.body, env).fv:
                out.append(Violation(ViolationKind.ERASING, f"frame[{i}]", f"{x} occurs in the environment"))

    if not is_max_context(decode_context(s.frame, s.stack, env)):
        out.append(Violation(ViolationKind.DECODING, "context", "decoded context is not maximal"))

    skel = _skeletons(initial)
    comps = list(_components(s, include_code=s.phase is EVAL))
    if env_subterms:
        comps += [(f"env[{e.var}]", e.code) for e in env.entries()]
    for path, c in comps:
        if skeleton(c) not in skel:
            out.append(Violation(ViolationKind.SUBTERM, path, pretty(c)))

    out.extend(_name_violations(s))
    return out


def _name_violations(s: MachineState) -> list:
    """Binders of the scanned components are unique and occur nowhere else.

    Scanned: the code (evaluation phase only), the stack, the stacks of
    head-argument items and erasing items.  Codes rebuilt while backtracking
    and head-argument functions may mention variables that environment
    entries also mention, so they only count as places where a scanned
    binder must not occur.
    """
    out = []
    env = s.env
    scanned = list(_components(s, include_code=s.phase is EVAL))
    bound: dict = {}
    for path, c in scanned:
        for b in binders(c):
            if b in bound:
                out.append(Violation(ViolationKind.NAME, path, f"binder {b} also bound at {bound[b]}"))
            else:
                bound[b] = path
    for path, c in scanned:
        # a binder of another component occurring free here is out of scope
        for b in c.fv:
            if b in bound:
                out.append(Violation(ViolationKind.NAME, path, f"binder {b} occurs outside its scope"))
    outside: set = set(env.names())
    if s.phase is BACK:
        outside |= s.code.names
    for item in iter_cons(s.frame):
        if type(item) is VarItem:
            outside.add(item.var)
        elif type(item) is HeadArg:
            outside |= item.fun.names
    for b in bound.keys() & outside:
        out.append(Violation(ViolationKind.NAME, bound[b], f"binder {b} occurs outside its scope"))
    # entries: the variable is fresh for its code and everything older
    seen: set = set()
    for e in reversed(env.entries()):
        if e.var in seen or e.var in e.code.names:
            out.append(Violation(ViolationKind.NAME, f"env[{e.var}]", "entry variable not fresh"))
        seen.add(e.var)
        seen |= e.code.names
    return out


def initial_check_state(code: Term, env: Environment = EMPTY_ENV, fresh: int = 1) -> MachineState:
    return MachineState(EVAL, (), code, (), env, fresh)
