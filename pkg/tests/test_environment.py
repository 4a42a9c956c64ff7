import pytest

from maxmam.environment import (
    ABS,
    EMPTY_ENV,
    NEU,
    Environment,
    Label,
    unfold,
    unfold_by_grafting,
    unfold_context,
)
from maxmam.syntax import parse
from maxmam.terms import HOLE, Abs, App, CAbs, CAppL, CAppR, Name, Var

x, y = Name("x"), Name("y")


def test_label_forms():
    assert str(ABS) == "abs" and str(NEU) == "neu"
    assert str(Label.red(3)) == "red 3"
    assert Label.parse("red 2") == Label.red(2)
    assert Label.parse("abs") == ABS
    assert Label.red(1).is_red and not NEU.is_red


@pytest.mark.parametrize("text", ["red 0", "red", "foo", "abs 1", "red x"])
def test_bad_labels(text):
    with pytest.raises(ValueError):
        Label.parse(text)


def test_red_needs_positive_n():
    with pytest.raises(ValueError):
        Label.red(0)


def test_unfold_substitutes_under_binder():
    env = [(y, App(Var(x), Var(x)), NEU)]
    assert unfold(Abs(x, Var(y)), env) == Abs(x, App(Var(x), Var(x)))


def test_unfold_empty_env():
    t = parse(r"\x.x y")
    assert unfold(t, EMPTY_ENV) is t


def test_unfold_variable_uses_tail():
    # x <- y z newest, y <- \w.w older: x unfolds to (\w.w) z
    env = Environment.from_entries([(x, parse("y z"), NEU), (y, parse(r"\w.w"), ABS)])
    assert unfold(Var(x), env) == parse(r"(\w.w) z")
    assert unfold(Var(x), env.tail()) == Var(x)


def test_unfold_matches_grafting_definition():
    env = Environment.from_entries(
        [
            (Name("a"), parse(r"\q.b q"), ABS),
            (Name("b"), parse(r"c c"), NEU),
            (Name("c"), parse(r"\r.r"), ABS),
        ]
    )
    for text in ["a", "a b c", r"\z.a (z b)", "d"]:
        t = parse(text)
        assert unfold(t, env) == unfold_by_grafting(t, env)


def test_unfold_context_examples():
    env = Environment.from_entries([(y, parse("a b"), NEU)])
    assert unfold_context(HOLE, env) == HOLE
    assert unfold_context(CAppL(HOLE, Var(y)), env) == CAppL(HOLE, parse("a b"))
    assert unfold_context(CAbs(x, HOLE), EMPTY_ENV) == CAbs(x, HOLE)
    assert unfold_context(CAppR(Var(y), HOLE), env) == CAppR(parse("a b"), HOLE)


def test_environment_views_share_and_fork():
    base = EMPTY_ENV.extend(x, parse("a b"), NEU)
    e1 = base.extend(y, parse(r"\z.z"), ABS)
    e2 = base.extend(y, parse("c d"), NEU)
    assert e1.lookup(y).label == ABS
    assert e2.lookup(y).label == NEU
    assert len(base) == 1 and base.lookup(y) is None
    assert [e.var for e in e1.entries()] == [y, x]


def test_lookup_returns_newest():
    env = Environment.from_entries([(x, parse("a a"), NEU), (x, parse(r"\z.z"), ABS)])
    assert env.lookup(x).label == NEU
    assert env.tail().lookup(x).label == ABS


def test_names_and_equality():
    env = Environment.from_entries([(x, parse("a b"), NEU)])
    assert env.names() == {x, Name("a"), Name("b")}
    assert env == Environment.from_entries([(x, parse("a b"), NEU)])
    assert x in env and y not in env
