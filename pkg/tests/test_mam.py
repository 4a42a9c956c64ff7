import json

import pytest
from helpers import corpus

from maxmam.environment import ABS, EMPTY_ENV, Label
from maxmam.machine import BACK, EVAL, ErasingRx, MachineState, Next, Transition as T, decode_state, from_list
from maxmam.mam import COMPLETED, FUEL_EXHAUSTED, Final, InvariantViolation, initial_state, is_final, mam_step, run
from maxmam.oracle import max_reduce
from maxmam.syntax import parse
from maxmam.terms import Abs, Name, Var, alpha_eq, is_well_named

OMEGA = parse(r"(\x.x x) \x.x x")


def steps(s, n):
    out = []
    for _ in range(n):
        r = mam_step(s)
        assert type(r) is Next
        out.append(r.kind)
        s = r.state
    return out, s


def test_initial_state():
    s = initial_state(parse("x"))
    assert s.phase is EVAL and s.code == Var("x") and s.frame == () and s.stack == () and len(s.env) == 0
    t = parse(r"\x.\x.x")
    s = initial_state(t)
    assert is_well_named(s.code) and alpha_eq(s.code, t)
    assert alpha_eq(decode_state(s), t)


def test_c1_then_m2_with_abs_label():
    kinds, s = steps(initial_state(parse(r"(\x.x) \y.y")), 2)
    assert kinds == [T.C1, T.M2]
    [entry] = s.env.entries()
    assert entry.var == Name("x") and entry.code == parse(r"\y.y") and entry.label == ABS


def test_m1_substitutes_variable_argument():
    s = MachineState(EVAL, (), parse(r"\x.x"), from_list([Var("y")]), EMPTY_ENV)
    r = mam_step(s)
    assert r.kind is T.M1 and r.state.code == Var("y") and r.state.stack == ()


def test_m3_drops_normal_argument():
    rest = from_list([Var("b")])
    s = MachineState(BACK, from_list([ErasingRx(Abs("x", Var("y")), rest)]), parse("a a"), (), EMPTY_ENV)
    r = mam_step(s)
    assert r.kind is T.M3
    assert r.state == MachineState(EVAL, (), Var("y"), rest, EMPTY_ENV)


def test_final_state_shape():
    r = run(parse(r"\x.x"), 100)
    assert r.completed and is_final(r.final_state)
    s = r.final_state
    assert s.phase is BACK and s.frame == () and s.stack == ()
    assert type(mam_step(s)) is Final


def test_run_examples():
    r = run(parse(r"(\x.x) \y.y"), 100)
    assert r.status == COMPLETED and alpha_eq(r.normal_form, parse(r"\y.y")) and r.m_count == 1
    r = run(parse(r"(\x.y) ((\z.z) \w.w)"), 100)
    assert r.status == COMPLETED and r.normal_form == Var("y") and r.m_count == 2
    r = run(parse(r"(\x.y) ((\x.x x) \x.x x)"), 1000)
    assert r.status == FUEL_EXHAUSTED and r.normal_form is None


def test_hand_traces():
    r = run(parse(r"(\x.x) \y.y"), 100, trace=True)
    assert [rec["kind"] for rec in r.trace] == ["c1", "m2", "c3"]
    r = run(parse(r"(\x.y) ((\z.z) \w.w)"), 100, trace=True)
    assert [rec["kind"] for rec in r.trace] == ["c1", "c7", "c1", "m2", "c3", "m3", "c3"]


def test_counters_and_families():
    r = run(parse(r"(\x.x x) \y.y"), 100)
    assert r.m_count == r.counters[T.M1] + r.counters[T.M2] + r.counters[T.M3]
    assert r.e_count == r.counters[T.E_RED] + r.counters[T.E_ABS]
    assert r.transitions == r.m_count + r.e_count + r.c_count
    assert not any(k.family == "o" for k in r.counters)


def test_fuel_exhaustion_keeps_last_state():
    r = run(OMEGA, 37, trace=True)
    assert r.status == FUEL_EXHAUSTED and r.transitions == 37
    assert r.trace[-1]["step"] == 37
    assert r.final_state.code is not None


def test_m_budget_stops_early():
    r = run(OMEGA, 10**5, m_budget=25)
    assert r.status == FUEL_EXHAUSTED and r.m_count == 25


def test_zero_fuel():
    r = run(parse("x"), 0)
    assert r.status == FUEL_EXHAUSTED and r.transitions == 0
    with pytest.raises(ValueError):
        run(parse("x"), -1)


def test_erasing_redex_with_shared_nonnormal_argument():
    # z is bound to a non-normal term; the erasing redex (\u.y) z must wait
    # for it, so the whole term diverges exactly like the oracle says
    t = parse(r"(\y.(\z.\v.(\u.y) z) (y (y y) y)) \y.y y")
    assert max_reduce(t, 500).status == FUEL_EXHAUSTED
    r = run(t, 10**5, m_budget=500)
    assert r.m_count == 500


def test_erasing_redex_with_shared_normal_argument():
    t = parse(r"(\z.(\u.a) z) (b c)")
    r = run(t, 100, trace=True)
    assert r.completed and r.normal_form == Var("a")
    assert "m1" in [rec["kind"] for rec in r.trace]


def test_env_grows_only_at_m2():
    for t in corpus(11, 200, 25):
        r = run(t, 5000, m_budget=100, trace=True)
        prev = 0
        for rec in r.trace:
            if rec["kind"] == "m2":
                assert rec["env_len"] == prev + 1
            else:
                assert rec["env_len"] == prev
            prev = rec["env_len"]


def _red1_segments(t, fuel=3000):
    """Kinds following each e_red on a ``red 1`` entry, up to the next m step."""
    s = initial_state(t)
    segments, current = [], None
    for _ in range(fuel):
        r = mam_step(s)
        if type(r) is Final:
            break
        if current is not None:
            current.append(r.kind.value)
            if r.kind.family == "m":
                segments.append(current)
                current = None
        if current is None and r.kind is T.E_RED and s.env.lookup(s.code.name).label == Label.red(1):
            current = []
        s = r.state
    return segments


def test_useful_exponentials_lead_to_multiplicatives():
    checked, bad = 0, []
    for t in corpus(12, 300, 25):
        for seg in _red1_segments(t):
            checked += 1
            if any(k[0] != "c" for k in seg[:-1]):
                bad.append((str(t), seg))
    assert checked > 50
    assert not bad, f"{len(bad)} of {checked} segments contain e steps; first: {bad[0]}"


def test_red1_copy_can_need_more_exponentials():
    # the copied abstraction is erasing and its argument z c is not normal:
    # c7 enters the argument, which needs another copy of z before any m step
    t = parse(r"(\z.z (z c)) \z.\v.(\x.b) a")
    assert _red1_segments(t)[0] == ["c7", "c1", "e_red", "m1"]


def test_invariant_violation_raised():
    with pytest.raises(InvariantViolation):
        import maxmam.mam as mam

        real = mam.collect_violations
        mam.collect_violations = lambda s, initial: ["boom"]
        try:
            run(parse(r"(\x.x) y"), 10, assert_invariants=True)
        finally:
            mam.collect_violations = real


def test_report_json():
    r = run(parse(r"(\x.x) \y.y"), 100, trace=True)
    out = json.loads(json.dumps(r.to_json()))
    assert out["status"] == "completed"
    assert out["normal_form"] == r"\y.y"
    assert (out["m"], out["e"], out["c"]) == (1, 0, 2)
    assert out["counters"] == {"c1": 1, "c3": 1, "m2": 1}
    assert len(out["trace"]) == 3
