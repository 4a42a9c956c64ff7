"""Empirical checks of the Max MAM complexity bounds and scaling families."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from maxmam.mam import ExecutionReport, run
from maxmam.oracle import max_reduce
from maxmam.terms import Abs, App, Name, Term, Var

# Frozen after exhaustive sweeps over all terms of size <= 9 plus random
# corpora; tests/test_calibration.py replays the sweeps.  Observed maxima:
# check steps 2*size, e/(m*m+m) 0.25, overhead ratio 1.97.  RATIO_BOUND is
# what the exact commutative bound and the quadratic bound together imply
# (worst at m = 1: (9*size + 3) / (2*size) <= 6).
CHECK_STEP_FACTOR = 2
CHECK_STEP_OFFSET = 0
QUADRATIC_FACTOR = 1
RATIO_BOUND = 6.0

CSV_COLUMNS = ("n", "size", "d", "m", "e", "c", "check_steps", "total", "ratio")


class MissingTrace(ValueError):
    pass


class Bound(NamedTuple):
    name: str
    lhs: float
    rhs: float
    holds: bool


def _bound(name: str, lhs, rhs) -> Bound:
    return Bound(name, lhs, rhs, lhs <= rhs)


@dataclass
class BoundReport:
    term_size: int
    d_len: int
    e_count: int
    c_count: int
    check_steps: int
    env_len: int
    total: int
    ratio: float
    status: str
    bounds: list = field(default_factory=list)
    n: int | None = None
    m_count: int = 0

    @property
    def ok(self) -> bool:
        return all(b.holds for b in self.bounds)

    def failed(self) -> list:
        return [b for b in self.bounds if not b.holds]

    def to_json(self) -> dict:
        out = asdict(self)
        out["bounds"] = [b._asdict() for b in self.bounds]
        return out


def check_step_bound(size: int) -> int:
    return CHECK_STEP_FACTOR * size + CHECK_STEP_OFFSET


def overhead_ratio(total: int, m: int, size: int) -> float:
    return total / ((1 + m * m) * size)


def local_boundedness(trace: list) -> tuple:
    """Worst m-free segment as ``(e_steps_in_segment, m_steps_before_it)``."""
    worst = (0, 0)
    m = e = 0
    for rec in trace:
        fam = rec["kind"][0]
        if fam == "m":
            m += 1
            e = 0
        elif fam == "e":
            e += 1
            if e - m > worst[0] - worst[1]:
                worst = (e, m)
    return worst


def env_growth(trace: list) -> tuple:
    """Step maximising ``env_len - m`` as ``(env_len, m_so_far)``."""
    worst = (0, 0)
    m = 0
    for rec in trace:
        if rec["kind"][0] == "m":
            m += 1
        if rec["env_len"] - m > worst[0] - worst[1]:
            worst = (rec["env_len"], m)
    return worst


def verify_bounds(
    report: ExecutionReport, initial_size: int | None = None, *, local: bool = True, n: int | None = None
) -> BoundReport:
    size = report.initial_size if initial_size is None else initial_size
    m, e, c = report.m_count, report.e_count, report.c_count
    bounds = [
        _bound("commutative", c, 3 * (1 + e) * size),
    ]
    if local:
        if report.trace is None:
            raise MissingTrace("local boundedness needs a traced run")
        env_len, m_at = env_growth(report.trace)
        bounds.append(_bound("env_length", env_len, m_at))
        seg_e, seg_m = local_boundedness(report.trace)
        bounds.append(_bound("local_boundedness", seg_e, seg_m))
    else:
        bounds.append(_bound("env_length", report.env_len, m))
    bounds.append(_bound("quadratic_exponentials", e, QUADRATIC_FACTOR * m * m + m))
    bounds.append(_bound("check_cost", report.check_steps, check_step_bound(size) * m))
    ratio = overhead_ratio(report.transitions, m, size)
    bounds.append(_bound("overhead_ratio", ratio, RATIO_BOUND))
    return BoundReport(
        term_size=size,
        d_len=m,
        e_count=e,
        c_count=c,
        check_steps=report.check_steps,
        env_len=report.env_len,
        total=report.transitions,
        ratio=ratio,
        status=report.status,
        bounds=bounds,
        n=n,
        m_count=m,
    )


# -- families -----------------------------------------------------------------


def church(k: int, tag: str = "") -> Term:
    s, z = Name("s" + tag), Name("z" + tag)
    body: Term = Var(z)
    for _ in range(k):
        body = App(Var(s), body)
    return Abs(s, Abs(z, body))


def identity(tag: str = "") -> Term:
    x = Name("x" + tag)
    return Abs(x, Var(x))


def id_chain(n: int) -> Term:
    """``I (I (... (I I)))`` with ``n`` applications."""
    t = identity()
    for _ in range(n):
        t = App(identity(), t)
    return t


def eraser_chain(n: int) -> Term:
    """``(\\x.y) ((\\z.z) ((\\x.y) ((\\z.z) ... w)))`` with ``n`` layers."""
    t: Term = Var("w")
    for _ in range(n):
        t = App(Abs("x", Var("y")), App(identity("z"), t))
    return t


def church_exp(n: int) -> Term:
    """The numeral ``n`` applied to the numeral 2 (normal form: 2^n)."""
    return App(church(n, "n"), church(2))


FAMILIES = {
    "id_chain": id_chain,
    "eraser_chain": eraser_chain,
    "church_exp": church_exp,
}


def bench_family(
    name: str, n_max: int, *, n_min: int = 1, fuel: int = 10**7, with_oracle: bool = True, oracle_fuel: int = 10**5
) -> list:
    """Run each instance ``n_min..n_max``; ``d`` is the oracle's step count."""
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    make = FAMILIES[name]
    rows = []
    for n in range(n_min, n_max + 1):
        t = make(n)
        rep = run(t, fuel, trace=True)
        br = verify_bounds(rep, n=n)
        if with_oracle:
            o = max_reduce(t, oracle_fuel)
            br.d_len = o.steps
        rows.append(br)
    return rows


def to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for br in rows:
        w.writerow([br.n, br.term_size, br.d_len, br.m_count, br.e_count, br.c_count, br.check_steps, br.total, f"{br.ratio:.6f}"])
    return buf.getvalue()
