"""
Tokenizer and recursive-descent parser for the expression language.

Precedence, tightest first: ^ (nonnegative integer literal exponent),
unary minus, * /, + -, then a single non-associative comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from src.core.errors import ParseError

COMPARISONS = ("<=", ">=", "==", "!=", "<", ">")
FUNCTIONS = ("st", "st~", "sign", "classify", "ln", "sin", "cos", "exp")
CONSTANTS = ("n", "inf", "eps")
RESERVED = set(FUNCTIONS) | set(CONSTANTS) | {"cyc", "deriv"}

_TOKEN = re.compile(
    r"(?P<space>[ \t\r]+)"
    r"|(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*~?)"
    r"|(?P<op><=|>=|==|!=|[-+*/^()\[\]{},;=<>])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, end
    text: str
    line: int
    column: int


def tokenize(text: str, line: int = 1) -> List[Token]:
    tokens, pos = [], 0
    text = text.split("#", 1)[0].rstrip("\n")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "space":
            word = m.group()
            if kind == "ident" and word.endswith("~") and word != "st~":
                raise ParseError("unexpected character '~'", line, pos + len(word))
            tokens.append(Token(kind, word, line, pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, len(text) + 1))
    return tokens


# -- Ast -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Name:
    id: str
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Cyc:
    items: Tuple["Ast", ...]
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    k: int
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Ast"
    right: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Ast"
    right: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Deriv:
    body: "Ast"
    var: str
    at: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


@dataclass(frozen=True)
class Assign:
    name: str
    expr: "Ast"
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)


Ast = Union[Num, Name, Cyc, Neg, Pow, BinOp, Compare, Call, Deriv, Assign]


class Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def error(self, message: str, expected=()) -> ParseError:
        tok = self.peek
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column, expected)

    def expect(self, text: str) -> Token:
        if self.peek.text != text or self.peek.kind == "end":
            raise self.error("unexpected token", [text])
        return self.advance()

    def statement(self) -> Ast:
        first, second = self.peek, self.tokens[min(self.pos + 1, len(self.tokens) - 1)]
        if first.kind == "ident" and second.text == "=":
            if first.text in RESERVED:
                raise ParseError(f"cannot assign to reserved name {first.text!r}", first.line, first.column)
            self.advance()
            self.advance()
            node = Assign(first.text, self.comparison(), first.line, first.column)
        else:
            node = self.comparison()
        if self.peek.kind != "end":
            raise self.error("unexpected token", ["end of input"])
        return node

    def comparison(self) -> Ast:
        left = self.additive()
        if self.peek.text in COMPARISONS:
            tok = self.advance()
            right = self.additive()
            if self.peek.text in COMPARISONS:
                raise self.error("comparisons do not chain")
            return Compare(tok.text, left, right, tok.line, tok.column)
        return left

    def additive(self) -> Ast:
        node = self.term()
        while self.peek.text in ("+", "-") and self.peek.kind == "op":
            tok = self.advance()
            node = BinOp(tok.text, node, self.term(), tok.line, tok.column)
        return node

    def term(self) -> Ast:
        node = self.unary()
        while self.peek.text in ("*", "/") and self.peek.kind == "op":
            tok = self.advance()
            node = BinOp(tok.text, node, self.unary(), tok.line, tok.column)
        return node

    def unary(self) -> Ast:
        if self.peek.text == "-" and self.peek.kind == "op":
            tok = self.advance()
            return Neg(self.unary(), tok.line, tok.column)
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        if self.peek.text == "^":
            tok = self.advance()
            if self.peek.kind != "num" or "." in self.peek.text:
                raise self.error("exponent must be a nonnegative integer literal", ["integer"])
            base = Pow(base, int(self.advance().text), tok.line, tok.column)
        return base

    def atom(self) -> Ast:
        tok = self.peek
        if tok.kind == "num":
            self.advance()
            return Num(Fraction(tok.text), tok.line, tok.column)
        if tok.text == "(":
            self.advance()
            node = self.comparison()
            self.expect(")")
            return node
        if tok.kind == "ident":
            self.advance()
            if tok.text == "cyc":
                return self.cyc(tok)
            if tok.text == "deriv":
                return self.deriv(tok)
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.comparison()
                self.expect(")")
                return Call(tok.text, arg, tok.line, tok.column)
            if tok.text.endswith("~"):
                raise ParseError(f"unknown function {tok.text!r}", tok.line, tok.column)
            if self.peek.text == "(":
                raise ParseError(f"unknown function {tok.text!r}", tok.line, tok.column, FUNCTIONS)
            return Name(tok.text, tok.line, tok.column)
        raise self.error("expected an expression", ["(", "-", "identifier", "number"])

    def cyc(self, start: Token) -> Cyc:
        if self.peek.text == "[":
            close, sep = "]", ","
        elif self.peek.text == "{":
            close, sep = "}", ";"
        else:
            raise self.error("expected a cyc constructor", ["[", "{"])
        self.advance()
        items = [self.additive()]
        while self.peek.text == sep:
            self.advance()
            items.append(self.additive())
        self.expect(close)
        return Cyc(tuple(items), start.line, start.column)

    def deriv(self, start: Token) -> Deriv:
        self.expect("(")
        body = self.additive()
        self.expect(",")
        var = self.peek
        if var.kind != "ident" or var.text in RESERVED:
            raise self.error("expected a variable name", ["identifier"])
        self.advance()
        self.expect(",")
        at = self.additive()
        self.expect(")")
        return Deriv(body, var.text, at, start.line, start.column)


def parse(text: str, line: int = 1) -> Optional[Ast]:
    """One statement per line; blank and comment-only lines parse to None"""
    tokens = tokenize(text, line)
    if tokens[0].kind == "end":
        return None
    return Parser(tokens).statement()
