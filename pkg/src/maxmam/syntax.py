"""Concrete syntax: ``\\x.t`` (or ``λx.t``), left-associative application.

Grammar::

    term := lam | app
    lam  := ("\\" | "λ") NAME "." term
    app  := atom+
    atom := NAME | "(" term ")"
    NAME := [a-zA-Z_][a-zA-Z0-9_']* ("#" digits)?
"""

from __future__ import annotations

import re

from maxmam.terms import Abs, App, Name, Term, Var

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:#[0-9]+)?")
_LAMBDAS = ("\\", "λ")


class ParseError(ValueError):
    """Syntax error at byte ``offset`` of the UTF-8 input."""

    def __init__(self, message: str, offset: int, expected: frozenset):
        self.offset = offset
        self.expected = expected
        exp = ", ".join(sorted(expected))
        super().__init__(f"{message} at byte {offset} (expected one of: {exp})")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def byte_offset(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message: str, expected) -> None:
        raise ParseError(message, self.byte_offset(self.pos), frozenset(expected))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def name(self) -> Name:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail("expected a variable name", {"NAME"})
        self.pos = m.end()
        return Name.parse(m.group())

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.fail(f"expected {ch!r}", {ch})
        self.pos += 1

    def term(self) -> Term:
        # application spine; a lambda swallows everything to its right
        head = None
        while True:
            c = self.peek()
            if c in _LAMBDAS:
                self.pos += 1
                x = self.name()
                self.expect(".")
                lam = Abs(x, self.term())
                return lam if head is None else App(head, lam)
            if c == "(":
                self.pos += 1
                atom = self.term()
                self.expect(")")
            elif c and _NAME.match(c):
                atom = Var(self.name())
            else:
                if head is None:
                    self.fail("expected a term", {"NAME", "(", "\\", "λ"})
                return head
            head = atom if head is None else App(head, atom)


def parse(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek():
        p.fail("unexpected trailing input", {"NAME", "(", ")", "\\", "λ", "end of input"})
    return t


def pretty(t: Term) -> str:
    """Render with minimal parentheses; ``parse(pretty(t)) == t``."""
    out: list = []
    # work items: a term with its "rightmost" flag, or a literal string
    todo: list = [(t, True)]
    while todo:
        item = todo.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        u, last = item
        if type(u) is Var:
            out.append(str(u.name))
        elif type(u) is Abs:
            out.append(f"\\{u.binder}.")
            todo.append((u.body, last))
        else:
            left, right = u.left, u.right
            right_parens = type(right) is App or (type(right) is Abs and not last)
            parts: list = []
            if type(left) is Abs:
                parts += ["(", (left, True), ")"]
            else:
                parts.append((left, False))
            parts.append(" ")
            if right_parens:
                parts += ["(", (right, True), ")"]
            else:
                parts.append((right, last))
            todo.extend(reversed(parts))
    return "".join(out)
