"""Strong evaluation of lambda terms under the maximal (perpetual) strategy.

``oracle`` is a direct reducer; ``mam`` is the Max MAM, an abstract machine
with a labeled global environment whose ``m`` transitions correspond one to
one with the reducer's steps; ``checking`` is the auxiliary machine that
labels environment entries.
"""

from maxmam.checking import CheckReport, StuckState, check
from maxmam.environment import ABS, EMPTY_ENV, NEU, Environment, Label, unfold
from maxmam.machine import MachineState, Transition, decode_state, is_well_labeled
from maxmam.mam import ExecutionReport, InvariantViolation, initial_state, mam_step, run
from maxmam.oracle import OracleResult, is_max_context, max_redex_position, max_reduce, max_step
from maxmam.syntax import ParseError, parse, pretty
from maxmam.terms import Abs, App, Name, Term, Var, alpha_eq, graft, rename_fresh, subst, well_name

__all__ = [
    "ABS",
    "EMPTY_ENV",
    "NEU",
    "Abs",
    "App",
    "CheckReport",
    "Environment",
    "ExecutionReport",
    "InvariantViolation",
    "Label",
    "MachineState",
    "Name",
    "OracleResult",
    "ParseError",
    "StuckState",
    "Term",
    "Transition",
    "Var",
    "alpha_eq",
    "check",
    "decode_state",
    "graft",
    "initial_state",
    "is_max_context",
    "is_well_labeled",
    "mam_step",
    "max_redex_position",
    "max_reduce",
    "max_step",
    "parse",
    "pretty",
    "rename_fresh",
    "run",
    "subst",
    "unfold",
    "well_name",
]
