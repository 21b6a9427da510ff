"""SLCS formulas: syntax tree, concrete syntax and desugaring.

Concrete syntax, loosest binding first::

    a R b   a P b   a S b     reachable / propagates / surrounded (non-associative)
    a -> b                    implication (right-associative)
    a | b                     disjunction
    a & b                     conjunction
    !a   N a                  negation, near

Literals are ``true`` and ``false``; ``N R P S true false`` are reserved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


RESERVED = frozenset({"N", "R", "P", "S", "true", "false"})
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Formula:
    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not IDENT.fullmatch(self.name) or self.name in RESERVED:
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Near(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Reach(Formula):
    """``left R right``: reachable from a ``right``-point through ``left``-points."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Prop(Formula):
    """``left P right``: a ``left``-path from here propagates to a ``right``-point."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Surr(Formula):
    left: Formula
    right: Formula


CORE_KINDS = (Atom, Top, Not, And, Near, Reach, Prop)
DERIVED_KINDS = (Bottom, Or, Implies, Surr)
UNARY_KINDS = (Not, Near)
BINARY_KINDS = (And, Or, Implies, Reach, Prop, Surr)
MODAL_KINDS = (Reach, Prop, Surr)

AnyFormula = Union[Formula, str]


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY_KINDS):
        return (f.arg,)
    if isinstance(f, BINARY_KINDS):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order traversal, children before parents."""
    for c in children(f):
        yield from subformulas(c)
    yield f


def depth(f: Formula) -> int:
    return 1 + max((depth(c) for c in children(f)), default=-1)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE_KINDS) for g in subformulas(f))


def uses(f: Formula, kind: type) -> bool:
    return any(isinstance(g, kind) for g in subformulas(f))


# Lexing and parsing


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "op", "eof"
    text: str
    line: int
    column: int


_SYMBOLS = ("->", "!", "&", "|", "(", ")")


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    while i < len(text):
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        m = IDENT.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token("op" if word in RESERVED else "ident", word, line, col))
            i, col = m.end(), col + len(word)
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("op", sym, line, col))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


_MODAL = {"R": Reach, "P": Prop, "S": Surr}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text == text

    def error(self, tok: Token, expected: str) -> ParseError:
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"expected {expected}, found {found}", tok.line, tok.column)

    def formula(self) -> Formula:
        left = self.impl()
        tok = self.peek()
        if tok.kind == "op" and tok.text in _MODAL:
            self.next()
            right = self.impl()
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text in _MODAL:
                raise ParseError(
                    f"operators R, P and S do not associate; parenthesise before {nxt.text!r}",
                    nxt.line,
                    nxt.column,
                )
            return _MODAL[tok.text](left, right)
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.next()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("!"):
            self.next()
            return Not(self.unary())
        if self.at("N"):
            self.next()
            return Near(self.unary())
        return self.atomish()

    def atomish(self) -> Formula:
        tok = self.next()
        if tok.kind == "ident":
            return Atom(tok.text)
        if tok.kind == "op":
            if tok.text == "true":
                return Top()
            if tok.text == "false":
                return Bottom()
            if tok.text == "(":
                f = self.formula()
                close = self.next()
                if not (close.kind == "op" and close.text == ")"):
                    raise self.error(close, "')'")
                return f
        raise self.error(tok, "a formula")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        raise p.error(tok, "end of input")
    return f


def as_formula(f: AnyFormula) -> Formula:
    return parse(f) if isinstance(f, str) else f


# Rendering

# binding strength; higher binds tighter
_LEVEL = {Reach: 0, Prop: 0, Surr: 0, Implies: 1, Or: 2, And: 3}
_SYMBOL = {Reach: "R", Prop: "P", Surr: "S", Implies: "->", Or: "|", And: "&"}


def _level(f: Formula) -> int:
    return _LEVEL.get(type(f), 4)


def render(f: Formula) -> str:
    """Text with the fewest parentheses that still parses back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, UNARY_KINDS):
        arg = render(f.arg)
        if _level(f.arg) < 4:
            arg = f"({arg})"
        return ("!" if isinstance(f, Not) else "N ") + arg
    level = _LEVEL[type(f)]
    if isinstance(f, MODAL_KINDS):
        # operands must sit at implication level or tighter
        lmin = rmin = 1
    elif isinstance(f, Implies):
        lmin, rmin = 2, 1
    else:
        lmin, rmin = level, level + 1
    left, right = render(f.left), render(f.right)
    if _level(f.left) < lmin:
        left = f"({left})"
    if _level(f.right) < rmin:
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


# Desugaring


def desugar(f: Formula) -> Formula:
    """Rewrite derived operators into the core ones.

    ``a S b`` becomes ``a & !(a R !(a | b))`` with the disjunction expanded by
    De Morgan.
    """
    if isinstance(f, (Atom, Top)):
        return f
    if isinstance(f, Bottom):
        return Not(Top())
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, Near):
        return Near(desugar(f.arg))
    a, b = desugar(f.left), desugar(f.right)
    if isinstance(f, And):
        return And(a, b)
    if isinstance(f, Reach):
        return Reach(a, b)
    if isinstance(f, Prop):
        return Prop(a, b)
    if isinstance(f, Or):
        return _or(a, b)
    if isinstance(f, Implies):
        return Not(And(a, Not(b)))
    if isinstance(f, Surr):
        return And(a, Not(Reach(a, Not(_or(a, b)))))
    raise TypeError(f"not a formula: {f!r}")


def _or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))
