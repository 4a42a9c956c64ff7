"""The Max MAM: strong evaluation under the maximal strategy.

Multiplicative transitions fire beta-redexes (m1 substitutes a variable
argument on the spot, m2 delays a non-variable argument in the global
environment with a usefulness label, m3 drops the normal argument of an
erasing redex).  Exponential transitions copy a useful environment entry on
a single occurrence.  Commutative transitions move through the code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from maxmam.checking import check
from maxmam.environment import EMPTY_ENV
from maxmam.machine import (
    BACK,
    EVAL,
    ErasingRx,
    HeadArg,
    MachineState,
    Next,
    Transition as T,
    VarItem,
    assert_invariants as collect_violations,
    decode_state,
    trace_record,
)
from maxmam.terms import Abs, App, NameSupply, Term, Var, graft, rename_fresh, well_name

COMPLETED = "completed"
FUEL_EXHAUSTED = "fuel_exhausted"


class InvariantViolation(AssertionError):
    def __init__(self, step: int, state: MachineState, violations: list):
        self.step = step
        self.state = state
        self.violations = violations
        lines = "\n  ".join(str(v) for v in violations)
        super().__init__(f"invariant violated after transition {step} in {state.describe()}:\n  {lines}")


def initial_state(t: Term) -> MachineState:
    supply = NameSupply()
    code = well_name(t, supply=supply)
    return MachineState(EVAL, (), code, (), EMPTY_ENV, supply.next_index)


def _copy(code: Term, fresh: int) -> tuple:
    supply = NameSupply(fresh)
    return rename_fresh(code, supply), supply.next_index


def _delays_redex(y: Var, env) -> bool:
    """Whether ``y`` names a ``red`` entry, i.e. stands for a non-normal term.

    Erasing such an argument on the spot would skip the redexes the maximal
    strategy must fire first, so the redex goes through c7 like any other
    erasing redex with a non-normal argument.
    """
    entry = env.lookup(y.name)
    return entry is not None and entry.label.kind == "red"


def _step(s: MachineState):
    """``(kind, next_state, check_steps, copy_size)`` or ``None`` if final."""
    phase, frame, code, stack, env, fresh = s
    if phase is EVAL:
        tc = type(code)
        if tc is App:
            return T.C1, MachineState(EVAL, frame, code.left, (code.right, stack), env, fresh), 0, 0
        if tc is Abs:
            if not stack:
                return T.C2, MachineState(EVAL, (VarItem(code.binder), frame), code.body, (), env, fresh), 0, 0
            arg, rest = stack
            x, body = code.binder, code.body
            if type(arg) is Var and (x in body.fv or not _delays_redex(arg, env)):
                # no capture possible: binders never clash on well-named states
                new = graft(body, x, arg)
                return T.M1, MachineState(EVAL, frame, new, rest, env, fresh), 0, body.size
            if x in body.fv:
                rep = check(arg, env)
                env2 = env.extend(x, arg, rep.label)
                return T.M2, MachineState(EVAL, frame, body, rest, env2, fresh), rep.steps, 0
            return T.C7, MachineState(EVAL, (ErasingRx(code, rest), frame), arg, (), env, fresh), 0, 0
        entry = env.lookup(code.name)
        if entry is not None:
            lab = entry.label
            if lab.kind == "red":
                new, fresh2 = _copy(entry.code, fresh)
                return T.E_RED, MachineState(EVAL, frame, new, stack, env, fresh2), 0, new.size
            if lab.kind == "abs" and stack:
                new, fresh2 = _copy(entry.code, fresh)
                return T.E_ABS, MachineState(EVAL, frame, new, stack, env, fresh2), 0, new.size
        return T.C3, MachineState(BACK, frame, code, stack, env, fresh), 0, 0

    if stack:
        arg, rest = stack
        return T.C6, MachineState(EVAL, (HeadArg(code, rest), frame), arg, (), env, fresh), 0, 0
    if not frame:
        return None
    item, below = frame
    ti = type(item)
    if ti is VarItem:
        return T.C4, MachineState(BACK, below, Abs(item.var, code), (), env, fresh), 0, 0
    if ti is HeadArg:
        return T.C5, MachineState(BACK, below, App(item.fun, code), item.stack, env, fresh), 0, 0
    return T.M3, MachineState(EVAL, below, item.abs.body, item.stack, env, fresh), 0, 0


class Final(NamedTuple):
    state: MachineState


def mam_step(s: MachineState):
    """``Next(state, kind)`` for the transition that applies, else ``Final(s)``."""
    r = _step(s)
    if r is None:
        return Final(s)
    return Next(r[1], r[0])


def is_final(s: MachineState) -> bool:
    return s.phase is BACK and not s.frame and not s.stack


@dataclass
class ExecutionReport:
    status: str
    final_state: MachineState
    normal_form: Term | None
    counters: Counter
    transitions: int
    check_steps: int
    copy_cost: int
    initial_size: int
    trace: list | None = field(default=None, repr=False)

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED

    def _family(self, fam: str) -> int:
        return sum(v for k, v in self.counters.items() if k.family == fam)

    @property
    def m_count(self) -> int:
        return self._family("m")

    @property
    def e_count(self) -> int:
        return self._family("e")

    @property
    def c_count(self) -> int:
        return self._family("c")

    @property
    def env_len(self) -> int:
        return len(self.final_state.env)

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "normal_form": None if self.normal_form is None else str(self.normal_form),
            "initial_size": self.initial_size,
            "transitions": self.transitions,
            "m": self.m_count,
            "e": self.e_count,
            "c": self.c_count,
            "check_steps": self.check_steps,
            "copy_cost": self.copy_cost,
            "env_len": self.env_len,
            "counters": {k.value: v for k, v in sorted(self.counters.items(), key=lambda kv: kv[0].value)},
            "final_code": str(self.final_state.code),
        }
        if self.trace is not None:
            out["trace"] = self.trace
        return out


def run(
    t: Term,
    fuel: int,
    *,
    m_budget: int | None = None,
    trace: bool = False,
    assert_invariants: bool = False,
) -> ExecutionReport:
    """Run the Max MAM on ``t`` for at most ``fuel`` transitions.

    With ``m_budget`` the run also stops once that many multiplicative
    transitions have been taken.  A run that stops before a final state
    reports ``fuel_exhausted`` and keeps the last state.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    s = initial_state(t)
    initial = s.code
    counters: Counter = Counter()
    records = [] if trace else None
    check_steps = copy_cost = steps = m = 0
    if assert_invariants:
        bad = collect_violations(s, initial)
        if bad:
            raise InvariantViolation(0, s, bad)
    final = False
    while steps < fuel and (m_budget is None or m < m_budget):
        r = _step(s)
        if r is None:
            final = True
            break
        kind, s, cs, cc = r
        steps += 1
        counters[kind] += 1
        check_steps += cs
        copy_cost += cc
        if kind.family == "m":
            m += 1
        if records is not None:
            records.append(trace_record(steps, kind, s))
        if assert_invariants:
            bad = collect_violations(s, initial)
            if bad:
                raise InvariantViolation(steps, s, bad)
    if not final:
        final = is_final(s)
    nf = decode_state(s) if final else None
    return ExecutionReport(
        COMPLETED if final else FUEL_EXHAUSTED,
        s,
        nf,
        counters,
        steps,
        check_steps,
        copy_cost,
        initial.size,
        records,
    )
