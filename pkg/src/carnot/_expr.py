"""Small recursive-descent parser shared by scalar, operator and polynomial text.

Grammar (whitespace-insensitive, '*' optional, '^' for powers):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/')? factor)*
    factor := '-'? atom ('^' INT)?
    atom   := NUMBER | 'sqrt' '(' INT ')' | VAR | '(' expr ')'

The caller supplies an adapter that lifts numbers, square roots and named
variables into one value type carrying +, -, * and / (division by scalars).
"""

from __future__ import annotations

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+\.\d+|\d+)|([A-Za-z_][A-Za-z_]*\d*)|([()+\-*/^]))")


class ExprError(ValueError):
    pass


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ExprError(f"bad character at {text[pos:]!r}")
            break
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append((sym, sym))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, adapter):
        self.tokens = tokens
        self.pos = 0
        self.adapter = adapter

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ExprError(f"expected {kind!r}, found {tok[1]!r}")
        return tok

    def parse(self):
        value = self.expr()
        if self.peek()[0] is not None:
            raise ExprError(f"trailing input at {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while True:
            kind = self.peek()[0]
            if kind in ("*", "/"):
                op = self.next()[0]
                rhs = self.factor()
                value = value * rhs if op == "*" else value / rhs
            elif kind in ("num", "name", "("):
                value = value * self.factor()
            else:
                return value

    def factor(self):
        if self.peek()[0] == "-":
            self.next()
            return -self.factor()
        value = self.atom()
        if self.peek()[0] == "^":
            self.next()
            exp = int(self.expect("num")[1])
            out = self.adapter.one()
            for _ in range(exp):
                out = out * value
            return out
        return value

    def atom(self):
        kind, text = self.next()
        if kind == "num":
            return self.adapter.number(Fraction(text))
        if kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "name":
            if text == "sqrt":
                self.expect("(")
                arg = self.expect("num")[1]
                self.expect(")")
                return self.adapter.sqrt(int(arg))
            return self.adapter.var(text)
        raise ExprError(f"unexpected token {text!r}")


def parse(text: str, adapter):
    return _Parser(_tokenize(text), adapter).parse()


class _ScalarAdapter:
    def __init__(self, field):
        self.field = field

    def number(self, q):
        return self.field.from_rational(q)

    def one(self):
        return self.field.one()

    def sqrt(self, n):
        return self.field.sqrt(n)

    def var(self, name):
        raise ExprError(f"unknown symbol {name!r} in scalar expression")


def parse_scalar(field, text):
    return parse(text, _ScalarAdapter(field))
