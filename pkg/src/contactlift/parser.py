"""Infix expression text for scenario files.

Grammar: `+ - * / ^` with integer exponents, calls `exp(...)`,
`log(...; branch)`, `sqrt(...; branch)`, the literal `i`, and named
variables declared by the caller.  `^` binds tighter than unary minus, so
`-z^2` parses as `-(z^2)`.  Form keys look like `d[z]` or `d[z]^d[w]`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from . import holoalg as ha
from .errors import ParseError, UnknownName
from .holoalg import Const, Expr, Var

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^();,])"
    r"|(?P<bad>\S))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    line: int
    column: int


def _tokenize(text: str):
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        pos = 0
        while pos < len(line):
            m = _TOKEN_RE.match(line, pos)
            if m is None:
                break
            col = m.start(m.lastgroup) + 1
            if m.lastgroup == "bad":
                raise ParseError(
                    f"unexpected character {m.group('bad')!r}",
                    line=lineno, column=col, token=m.group("bad"),
                )
            if m.lastgroup == "number":
                tokens.append(Token("number", m.group(0).strip(), lineno, col))
            else:
                tokens.append(Token(m.lastgroup, m.group(m.lastgroup), lineno, col))
            pos = m.end()
    tokens.append(Token("end", "", len(text.splitlines() or [""]), len(text) + 1))
    return tokens


_FUNCTIONS = ("exp", "log", "sqrt")


class _Parser:
    def __init__(self, tokens, variables: Sequence[str]):
        self.tokens = tokens
        self.pos = 0
        self.variables = {name: i for i, name in enumerate(variables)}

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.take()
        if tok.text != text:
            raise ParseError(
                f"expected {text!r}, found {tok.text or 'end of input'!r}",
                line=tok.line, column=tok.column, token=tok.text,
            )
        return tok

    def parse(self) -> Expr:
        e = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(
                f"trailing input {tok.text!r}",
                line=tok.line, column=tok.column, token=tok.text,
            )
        return e

    def sum(self) -> Expr:
        e = self.product()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            rhs = self.product()
            e = ha._add(e, rhs) if op == "+" else ha._sub(e, rhs)
        return e

    def product(self) -> Expr:
        e = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            rhs = self.unary()
            e = ha._mul(e, rhs) if op == "*" else ha._div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek().text == "-":
            self.take()
            return ha._neg(self.unary())
        if self.peek().text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            base = ha.PowInt(base, self.integer())
        return base

    def integer(self) -> int:
        sign = 1
        if self.peek().text == "-":
            self.take()
            sign = -1
        tok = self.take()
        if tok.kind != "number" or "." in tok.text or "e" in tok.text.lower():
            raise ParseError(
                f"expected an integer, found {tok.text or 'end of input'!r}",
                line=tok.line, column=tok.column, token=tok.text,
            )
        return sign * int(tok.text)

    def atom(self) -> Expr:
        tok = self.take()
        if tok.kind == "number":
            return Const(float(tok.text))
        if tok.text == "(":
            e = self.sum()
            self.expect(")")
            return e
        if tok.kind == "name":
            if tok.text == "i":
                return Const(1j)
            if tok.text == "pi":
                return Const(math.pi)
            if tok.text in _FUNCTIONS:
                return self.call(tok.text)
            if tok.text in self.variables:
                return Var(self.variables[tok.text])
            raise UnknownName(
                f"unknown name {tok.text!r} at line {tok.line} column {tok.column}"
            )
        raise ParseError(
            f"unexpected token {tok.text or 'end of input'!r}",
            line=tok.line, column=tok.column, token=tok.text,
        )

    def call(self, fn: str) -> Expr:
        self.expect("(")
        arg = self.sum()
        branch = 0
        if self.peek().text == ";":
            self.take()
            branch = self.integer()
        self.expect(")")
        if fn == "exp":
            if branch:
                raise ParseError("exp takes no branch", token=fn)
            return ha.Exp(arg)
        if fn == "log":
            return ha.Log(arg, branch)
        if branch not in (0, 1):
            raise ParseError("sqrt branch must be 0 or 1", token=fn)
        return ha.Sqrt(arg, branch)


def parse_expression(text: str, variables: Sequence[str]) -> Expr:
    return _Parser(_tokenize(text), variables).parse()


_FORM_KEY_RE = re.compile(r"^d\[([A-Za-z_][A-Za-z_0-9]*)\]$")


def parse_form_key(text: str, variables: Sequence[str]) -> tuple:
    """`d[z]^d[w]` -> index tuple; the empty string is the degree-0 key."""
    text = text.strip()
    if not text:
        return ()
    index = {name: i for i, name in enumerate(variables)}
    out = []
    for part in text.split("^"):
        part = part.strip()
        m = _FORM_KEY_RE.match(part)
        if m is None:
            raise ParseError(f"bad form key component {part!r}", token=part)
        name = m.group(1)
        if name not in index:
            raise UnknownName(f"unknown coordinate {name!r} in form key")
        out.append(index[name])
    if sorted(set(out)) != out:
        raise ParseError(
            f"form key {text!r} must use strictly increasing coordinates",
            token=text,
        )
    return tuple(out)
