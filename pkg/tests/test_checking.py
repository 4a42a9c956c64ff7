import pytest

from maxmam.checking import Output, StuckState, check, checking_step
from maxmam.environment import ABS, EMPTY_ENV, NEU, Environment, Label
from maxmam.machine import BACK, EVAL, Next, Transition as T, initial_check_state, is_well_labeled
from maxmam.syntax import parse
from maxmam.terms import Name

R1, R2 = Label.red(1), Label.red(2)


def env_of(*rows):
    return Environment.from_entries([(Name(v), parse(c), Label.parse(l)) for v, c, l in rows])


def run_steps(code, env=EMPTY_ENV):
    s = initial_check_state(parse(code), env)
    out = []
    while True:
        r = checking_step(s)
        out.append(r.kind)
        if type(r) is Output:
            return out, r.label
        s = r.state


def test_first_steps_of_a_redex():
    s = initial_check_state(parse(r"(\x.x) y"))
    r = checking_step(s)
    assert type(r) is Next and r.kind is T.C1
    assert r.state.code == parse(r"\x.x")
    assert r.state.stack == (parse("y"), ())
    r = checking_step(r.state)
    assert r == Output(R1, T.O1)


def test_abstraction_trace():
    s = initial_check_state(parse(r"\x.x"))
    r = checking_step(s)
    assert r.kind is T.C2 and r.state.code == parse("x") and r.state.phase is EVAL
    r = checking_step(r.state)
    assert r.kind is T.C3 and r.state.phase is BACK
    r = checking_step(r.state)
    assert r.kind is T.C4 and r.state.code == parse(r"\x.x") and r.state.frame == ()
    assert checking_step(r.state) == Output(ABS, T.O5)


def test_neutral_trace():
    assert run_steps("x y") == ([T.C1, T.C3, T.C6, T.C3, T.C5, T.O4], NEU)


def test_check_examples():
    assert check(parse(r"\y.y")).label == ABS
    env = env_of(("x", r"\w.w", "abs"))
    rep = check(parse("x y"), env)
    assert rep.label == R2
    assert is_well_labeled(env.extend(Name("z"), parse("x y"), rep.label))
    kinds, label = run_steps(r"(\x.y) (a b)")
    assert kinds == [T.C1, T.C7, T.C1, T.C3, T.C6, T.C3, T.C5, T.O6]
    assert label == R1


def test_red_label_is_incremented():
    env = env_of(("z", "x a", "red 2"), ("x", r"\w.w", "abs"))
    assert check(parse("b z"), env).label == Label.red(3)


def test_abs_variable_without_arguments_is_useless():
    env = env_of(("x", r"\w.w", "abs"))
    assert check(parse(r"\q.q x"), env).label == ABS
    assert check(parse("a x"), env).label == NEU


def test_variable_argument_of_erasing_redex():
    # the Checking AM walks into variable arguments of erasing redexes too
    env = env_of(("z", "x a", "red 2"), ("x", r"\w.w", "abs"))
    assert check(parse(r"(\q.b) z"), env).label == Label.red(3)
    assert check(parse(r"(\q.b) c")).label == R1


def test_steps_equal_counter_sum():
    rep = check(parse(r"(\x.y) (a (\z.z) b)"))
    assert rep.steps == sum(rep.counters.values())


def test_trace_ends_with_output():
    rep = check(parse("x y"), trace=True)
    assert rep.trace[-1] == {"step": 6, "kind": "o4", "label": "neu"}
    assert len(rep.trace) == rep.steps


def test_bare_variable_is_rejected():
    with pytest.raises(StuckState):
        check(parse("x"))


def test_stuck_state_reported():
    s = initial_check_state(parse("x"))
    s = checking_step(s).state
    with pytest.raises(StuckState):
        checking_step(s)


def test_read_only():
    env = env_of(("x", r"\w.w", "abs"))
    before = env.entries()
    code = parse(r"(\q.x q) (x x)")
    check(code, env)
    assert env.entries() == before
    assert code == parse(r"(\q.x q) (x x)")
