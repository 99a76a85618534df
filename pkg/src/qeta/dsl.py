"""Job language for eta-quotient definitions and assertions.

    program   := stmt*
    stmt      := "let" NAME "=" expr "@" "level" INT
               | "assert" assertion
    expr      := term (("*" | "/") term)*
    term      := base ("^" INT)?
    base      := "eta" "(" INT "z" ")" | NAME | INT | "(" expr ")" | "U" INT "(" expr ")"
    assertion := "modular" "(" NAME ")"
               | expr "==" expr "to" INT "terms"
               | "congruence" NAME "base" INT "alpha" INT "upto" INT
               | "orders" "(" NAME ")" "==" "[" rational ("," rational)* "]"
    rational  := "-"? INT ("/" INT)?

``#`` starts a comment that runs to the end of the line.  ``U3`` and
``U 3`` are the same token pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

KEYWORDS = frozenset(
    "let assert eta level modular to terms congruence base alpha upto orders U".split()
)

# deeper nesting than this is reported instead of exhausting the Python stack
MAX_NESTING = 100


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str
    token: str

    def __str__(self) -> str:
        shown = repr(self.token) if self.token else "end of input"
        return f"{self.line}:{self.column}: error: {self.message} (at {shown})"

    def to_dict(self) -> dict:
        return {"line": self.line, "column": self.column, "message": self.message, "token": self.token}


class ParseError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


# -- tokens ---------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, OP, EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>==|[=@*/^()\[\],-])"
)


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(Diagnostic(line, col, "unexpected character", source[pos]))
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int":
            tokens.append(Token("INT", text, line, col))
        elif kind == "name":
            u = re.fullmatch(r"U(\d+)", text)
            if u:
                tokens.append(Token("NAME", "U", line, col))
                tokens.append(Token("INT", u.group(1), line, col + 1))
            else:
                tokens.append(Token("NAME", text, line, col))
        elif kind == "op":
            tokens.append(Token("OP", text, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- syntax tree ----------------------------------------------------------------

Pos = Optional[tuple[int, int]]


def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Eta:
    delta: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Name:
    id: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Num:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class UOp:
    p: int
    arg: "Expr"
    pos: Pos = _pos()


Expr = Union[Eta, Name, Num, BinOp, Pow, UOp]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    level: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class AssertModular:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class AssertIdentity:
    lhs: Expr
    rhs: Expr
    terms: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class AssertCongruence:
    name: str
    base: int
    alpha: int
    upto: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class AssertOrders:
    name: str
    orders: tuple[Fraction, ...]
    pos: Pos = _pos()


Statement = Union[Let, AssertModular, AssertIdentity, AssertCongruence, AssertOrders]


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]


def names_in(expr: Expr) -> set[str]:
    if isinstance(expr, Name):
        return {expr.id}
    if isinstance(expr, BinOp):
        return names_in(expr.left) | names_in(expr.right)
    if isinstance(expr, (Pow,)):
        return names_in(expr.base)
    if isinstance(expr, UOp):
        return names_in(expr.arg)
    return set()


# -- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(Diagnostic(tok.line, tok.column, message, tok.text))

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def is_op(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def is_kw(self, word: str) -> bool:
        return self.tok.kind == "NAME" and self.tok.text == word

    def expect_op(self, text: str) -> Token:
        if not self.is_op(text):
            self.fail(f"expected '{text}'")
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            self.fail(f"expected '{word}'")
        return self.advance()

    def expect_int(self, what: str = "integer") -> int:
        if self.tok.kind != "INT":
            self.fail(f"expected {what}")
        return int(self.advance().text)

    def expect_name(self) -> Token:
        if self.tok.kind != "NAME":
            self.fail("expected a name")
        if self.tok.text in KEYWORDS:
            self.fail(f"'{self.tok.text}' is a reserved word")
        return self.advance()

    # grammar

    def program(self) -> Program:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return Program(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        if self.is_kw("let"):
            self.advance()
            name = self.expect_name().text
            self.expect_op("=")
            expr = self.expr()
            self.expect_op("@")
            self.expect_kw("level")
            level = self.expect_int("level")
            if level < 1:
                self.fail("level must be positive", self.peek(-1))
            return Let(name, expr, level, (t.line, t.column))
        if self.is_kw("assert"):
            self.advance()
            return self.assertion((t.line, t.column))
        self.fail("expected 'let' or 'assert'")

    def assertion(self, pos) -> Statement:
        if self.is_kw("modular"):
            self.advance()
            self.expect_op("(")
            name = self.expect_name().text
            self.expect_op(")")
            return AssertModular(name, pos)
        if self.is_kw("congruence"):
            self.advance()
            name = self.expect_name().text
            self.expect_kw("base")
            base = self.expect_int("base")
            self.expect_kw("alpha")
            alpha = self.expect_int("alpha")
            self.expect_kw("upto")
            upto = self.expect_int("index bound")
            return AssertCongruence(name, base, alpha, upto, pos)
        if self.is_kw("orders"):
            self.advance()
            self.expect_op("(")
            name = self.expect_name().text
            self.expect_op(")")
            self.expect_op("==")
            self.expect_op("[")
            values = [self.rational()]
            while self.is_op(","):
                self.advance()
                values.append(self.rational())
            self.expect_op("]")
            return AssertOrders(name, tuple(values), pos)
        lhs = self.expr()
        self.expect_op("==")
        rhs = self.expr()
        self.expect_kw("to")
        terms = self.expect_int("term count")
        self.expect_kw("terms")
        if terms < 1:
            self.fail("term count must be positive", self.peek(-2))
        return AssertIdentity(lhs, rhs, terms, pos)

    def rational(self) -> Fraction:
        sign = 1
        if self.is_op("-"):
            self.advance()
            sign = -1
        num = self.expect_int("rational number")
        den = 1
        if self.is_op("/"):
            self.advance()
            tok = self.tok
            den = self.expect_int("denominator")
            if den == 0:
                self.fail("zero denominator", tok)
        return Fraction(sign * num, den)

    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail(f"expression nested more than {MAX_NESTING} levels deep")
        left = self.term()
        while self.is_op("*") or self.is_op("/"):
            op = self.advance()
            right = self.term()
            left = BinOp(op.text, left, right, (op.line, op.column))
        self.depth -= 1
        return left

    def term(self) -> Expr:
        base = self.base()
        if self.is_op("^"):
            op = self.advance()
            return Pow(base, self.expect_int("exponent"), (op.line, op.column))
        return base

    def base(self) -> Expr:
        t = self.tok
        pos = (t.line, t.column)
        if t.kind == "INT":
            self.advance()
            return Num(int(t.text), pos)
        if self.is_op("("):
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        if self.is_kw("eta"):
            self.advance()
            self.expect_op("(")
            delta = self.expect_int("eta argument like 9z")
            if not (self.tok.kind == "NAME" and self.tok.text == "z"):
                self.fail("expected 'z' after the eta multiplier")
            self.advance()
            self.expect_op(")")
            if delta < 1:
                self.fail("eta multiplier must be positive", t)
            return Eta(delta, pos)
        if self.is_kw("U") and self.peek().kind == "INT":
            self.advance()
            p = self.expect_int("prime")
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return UOp(p, arg, pos)
        if t.kind == "NAME":
            return Name(self.expect_name().text, pos)
        self.fail("expected an expression")


def parse_program(source: str) -> Program:
    return _Parser(source).program()


def parse_expr(source: str) -> Expr:
    p = _Parser(source)
    e = p.expr()
    if p.tok.kind != "EOF":
        p.fail("unexpected input after expression")
    return e


# -- printer --------------------------------------------------------------------


def format_expr(e: Expr) -> str:
    if isinstance(e, Eta):
        return f"eta({e.delta}z)"
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, UOp):
        return f"U{e.p}({format_expr(e.arg)})"
    if isinstance(e, Pow):
        inner = format_expr(e.base)
        if isinstance(e.base, (BinOp, Pow)):
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    if isinstance(e, BinOp):
        right = format_expr(e.right)
        if isinstance(e.right, BinOp):
            right = f"({right})"
        return f"{format_expr(e.left)} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def _format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_statement(s: Statement) -> str:
    if isinstance(s, Let):
        return f"let {s.name} = {format_expr(s.expr)} @ level {s.level}"
    if isinstance(s, AssertModular):
        return f"assert modular({s.name})"
    if isinstance(s, AssertIdentity):
        return f"assert {format_expr(s.lhs)} == {format_expr(s.rhs)} to {s.terms} terms"
    if isinstance(s, AssertCongruence):
        return f"assert congruence {s.name} base {s.base} alpha {s.alpha} upto {s.upto}"
    if isinstance(s, AssertOrders):
        return f"assert orders({s.name}) == [{', '.join(_format_rational(x) for x in s.orders)}]"
    raise TypeError(f"not a statement: {s!r}")


def format_program(p: Program) -> str:
    return "".join(format_statement(s) + "\n" for s in p.statements)
