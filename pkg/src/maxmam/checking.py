"""The Checking AM: computes the usefulness label of a code in an environment.

It walks the code exactly like the Max MAM searches for redexes, but instead
of reducing it stops at the first sign of a redex (or at the end of the walk)
and outputs a label.  It never modifies the environment or the code.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from maxmam.environment import ABS, EMPTY_ENV, NEU, Environment, Label
from maxmam.machine import (
    BACK,
    EVAL,
    ErasingRx,
    HeadArg,
    MachineState,
    Next,
    Transition as T,
    VarItem,
    initial_check_state,
    trace_record,
)
from maxmam.terms import Abs, App, Term, Var


class StuckState(RuntimeError):
    """No transition applies: the state violates the machine's precondition."""


class Output(NamedTuple):
    label: Label
    kind: T


def checking_step(s: MachineState):
    """One transition: ``Next(state, kind)``, or ``Output(label, kind)`` at the end."""
    phase, frame, code, stack, env, fresh = s
    if phase is EVAL:
        tc = type(code)
        if tc is App:
            return Next(MachineState(EVAL, frame, code.left, (code.right, stack), env, fresh), T.C1)
        if tc is Abs:
            if stack:
                if code.binder in code.body.fv:
                    return Output(Label.red(1), T.O1)
                arg, rest = stack
                return Next(MachineState(EVAL, (ErasingRx(code, rest), frame), arg, (), env, fresh), T.C7)
            return Next(MachineState(EVAL, (VarItem(code.binder), frame), code.body, (), env, fresh), T.C2)
        entry = env.lookup(code.name)
        if entry is not None:
            if entry.label.kind == "red":
                return Output(Label.red(entry.label.n + 1), T.O2)
            if entry.label.kind == "abs" and stack:
                return Output(Label.red(2), T.O3)
        return Next(MachineState(BACK, frame, code, stack, env, fresh), T.C3)

    if stack:
        arg, rest = stack
        return Next(MachineState(EVAL, (HeadArg(code, rest), frame), arg, (), env, fresh), T.C6)
    if frame:
        item, below = frame
        ti = type(item)
        if ti is VarItem:
            return Next(MachineState(BACK, below, Abs(item.var, code), (), env, fresh), T.C4)
        if ti is HeadArg:
            return Next(MachineState(BACK, below, App(item.fun, code), item.stack, env, fresh), T.C5)
        return Output(Label.red(1), T.O6)
    if type(code) is App:
        return Output(NEU, T.O4)
    if type(code) is Abs:
        return Output(ABS, T.O5)
    raise StuckState(f"no Checking AM transition applies to {s.describe()}")


@dataclass
class CheckReport:
    label: Label
    steps: int
    counters: Counter
    trace: list | None = field(default=None, repr=False)


def check(code: Term, env: Environment = EMPTY_ENV, *, trace: bool = False) -> CheckReport:
    """Run the Checking AM from ``(▼, ε, code, ε, env)`` to its output."""
    if type(code) is Var:
        raise StuckState("the Checking AM is not defined on a bare variable")
    s = initial_check_state(code, env)
    counters: Counter = Counter()
    records = [] if trace else None
    steps = 0
    while True:
        r = checking_step(s)
        kind = r.kind
        steps += 1
        counters[kind] += 1
        if type(r) is Output:
            if records is not None:
                records.append({"step": steps, "kind": kind.value, "label": str(r.label)})
            return CheckReport(r.label, steps, counters, records)
        s = r.state
        if records is not None:
            records.append(trace_record(steps, kind, s))
