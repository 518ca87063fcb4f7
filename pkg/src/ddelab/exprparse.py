"""Recursive-descent parser for exact rational-function expressions.

Grammar (whitespace-insensitive):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' exponent)*
    atom    := INTEGER | 'i' | NAME | '(' expr ')'
    exponent:= ['-'] INTEGER

Integers are unbounded; rationals are written as quotients (``3/4``), which the
general division rule handles.  ``i`` is the imaginary unit.  Allowed variable
names are checked against a caller-supplied set (default: just ``z``), and any
error carries a 1-based line and column.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

from .fieldelem import FieldElem


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class _Token(NamedTuple):
    kind: str  # INT, NAME, OP, END
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("OP", ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("END", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], allowed: frozenset[str]):
        self.tokens = tokens
        self.pos = 0
        self.allowed = allowed

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == text:
            return self.advance()
        raise ParseError(f"expected {text!r}", tok.line, tok.col)

    def parse(self) -> FieldElem:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)
        return value

    def expr(self) -> FieldElem:
        value = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if tok.text == "+" else value - rhs
            else:
                return value

    def term(self) -> FieldElem:
        value = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text in "*/":
                self.advance()
                rhs = self.factor()
                if tok.text == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero:
                        raise ParseError("division by zero", tok.line, tok.col)
                    value = value / rhs
            else:
                return value

    def factor(self) -> FieldElem:
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            return -self.factor()
        return self.power()

    def power(self) -> FieldElem:
        value = self.atom()
        while True:
            tok = self.peek()
            if tok.kind == "OP" and tok.text == "^":
                self.advance()
                n = self.exponent()
                if n < 0 and value.is_zero:
                    raise ParseError("zero raised to a negative power", tok.line, tok.col)
                value = value ** n
            else:
                return value

    def exponent(self) -> int:
        sign = 1
        tok = self.peek()
        if tok.kind == "OP" and tok.text == "-":
            self.advance()
            sign = -1
            tok = self.peek()
        if tok.kind != "INT":
            raise ParseError("expected an integer exponent", tok.line, tok.col)
        self.advance()
        return sign * int(tok.text)

    def atom(self) -> FieldElem:
        tok = self.advance()
        if tok.kind == "INT":
            return FieldElem.const(int(tok.text))
        if tok.kind == "NAME":
            if tok.text == "i":
                from .gaussian import I

                return FieldElem.const(I)
            if tok.text in self.allowed:
                return FieldElem.var(tok.text)
            raise ParseError(f"unknown symbol {tok.text!r}", tok.line, tok.col)
        if tok.kind == "OP" and tok.text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        shown = tok.text if tok.text else "end of input"
        raise ParseError(f"unexpected {shown!r}", tok.line, tok.col)


def parse_expression(text: str, allowed_vars: Iterable[str] = ("z",)) -> FieldElem:
    """Parse an exact rational expression into a FieldElem."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}", 1, 1)
    tokens = _tokenize(text)
    return _Parser(tokens, frozenset(allowed_vars)).parse()
