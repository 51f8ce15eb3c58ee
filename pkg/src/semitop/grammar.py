"""ASCII surface syntax for formulas.

Precedence, loosest first::

    ->  =>  <->        right-associative
    (+)                left-associative
    |                  left-associative
    &                  left-associative
    ! %T %B %F %TB %TF [Q] [C] [E] [S]     prefix
    exists a.  exists01 a.  exists1 a.  forall a.    prefix, body extends right

Atoms are ``bot``, ``pred(term)``, ``term == term``, ``correct{p, q}``,
``incorrect{p}`` and parenthesised formulas.  Terms are variables (``a``,
``v'``) or value literals (``'0``, ``'half``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    And, Binary, Bot, Contraquorum, Correct, Correctness, Eq, Everywhere, Exists,
    ExistsAffine, ExistsUnique, Forall, Formula, Iff, Incorrect, ModB, ModF, ModT,
    ModTB, ModTF, Neg, Or, Pred, Quantifier, Quorum, Somewhere, StrongImp, Term,
    Unary, Val, Var, WeakImp, Xor,
)

KEYWORDS = frozenset({"bot", "exists", "exists01", "exists1", "forall", "correct", "incorrect"})

PREFIX = {
    "!": Neg, "%T": ModT, "%B": ModB, "%F": ModF, "%TB": ModTB, "%TF": ModTF,
    "[Q]": Quorum, "[C]": Contraquorum, "[E]": Everywhere, "[S]": Somewhere,
}
PREFIX_TEXT = {cls: tok for tok, cls in PREFIX.items()}

QUANTIFIERS = {"exists": Exists, "exists01": ExistsAffine, "exists1": ExistsUnique, "forall": Forall}
QUANTIFIER_TEXT = {cls: kw for kw, cls in QUANTIFIERS.items()}

IMPLICATIONS = {"->": WeakImp, "=>": StrongImp, "<->": Iff}
BINARY_TEXT = {WeakImp: "->", StrongImp: "=>", Iff: "<->", Xor: "(+)", Or: "|", And: "&"}

# binding strength of each binary connective; prefix operators sit at 5, atoms at 6
LEVEL = {WeakImp: 1, StrongImp: 1, Iff: 1, Xor: 2, Or: 3, And: 4}
PREFIX_LEVEL = 5
ATOM_LEVEL = 6

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|=>|==|\(\+\)|%TB|%TF|%T|%B|%F|\[[QCES]\]|[!&|().,{}])
  | (?P<value>'[A-Za-z0-9_]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: str | None = None):
        self.position = position
        self.expected = expected
        text = f"{message} at position {position}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # op, value, ident, end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "op" and m.group().startswith("%") and m.end() < len(text) \
                    and (text[m.end()].isalnum() or text[m.end()] == "_"):
                raise ParseError(f"unknown modality {m.group() + text[m.end()]!r}", pos)
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos, repr(text))
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "end" else repr(tok.text)

    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos,
                             "an infix connective or end of input")
        return phi

    def formula(self) -> Formula:
        left = self.binary(2)
        if self.tok.kind == "op" and self.tok.text in IMPLICATIONS:
            cls = IMPLICATIONS[self.advance().text]
            return cls(left, self.formula())
        return left

    def binary(self, level: int) -> Formula:
        if level > 4:
            return self.prefix()
        op = {2: "(+)", 3: "|", 4: "&"}[level]
        cls = {2: Xor, 3: Or, 4: And}[level]
        left = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text == op:
            self.advance()
            left = cls(left, self.binary(level + 1))
        return left

    def prefix(self) -> Formula:
        tok = self.tok
        if tok.kind == "op" and tok.text in PREFIX:
            self.advance()
            return PREFIX[tok.text](self.prefix())
        if tok.kind == "ident" and tok.text in QUANTIFIERS:
            self.advance()
            var = self.variable()
            self.expect(".")
            return QUANTIFIERS[tok.text](var, self.formula())
        return self.atom()

    def variable(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise ParseError(f"unexpected {self._describe(tok)}", tok.pos, "a variable name")
        self.advance()
        return tok.text

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "value":
            self.advance()
            return Val(tok.text[1:])
        return Var(self.variable())

    def atom(self) -> Formula:
        tok = self.tok
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            phi = self.formula()
            self.expect(")")
            return phi
        if tok.kind == "ident" and tok.text == "bot":
            self.advance()
            return Bot()
        if tok.kind == "ident" and tok.text in ("correct", "incorrect"):
            self.advance()
            self.expect("{")
            preds = [self.variable()]
            while self.tok.text == ",":
                self.advance()
                preds.append(self.variable())
            self.expect("}")
            return (Correct if tok.text == "correct" else Incorrect)(tuple(preds))
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            nxt = self.tokens[self.i + 1]
            if nxt.kind == "op" and nxt.text == "(":
                self.advance()
                self.advance()
                arg = self.term()
                self.expect(")")
                return Pred(tok.text, arg)
        if tok.kind in ("ident", "value"):
            left = self.term()
            self.expect("==")
            return Eq(left, self.term())
        raise ParseError(f"unexpected {self._describe(tok)}", tok.pos, "a formula")


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def _term_text(t: Term) -> str:
    return f"'{t.name}" if isinstance(t, Val) else t.name


def _level(phi: Formula) -> int:
    if isinstance(phi, Binary):
        return LEVEL[type(phi)]
    if isinstance(phi, (Unary, Quantifier)):
        return PREFIX_LEVEL
    return ATOM_LEVEL


def _fmt(phi: Formula, min_level: int, tail: bool) -> str:
    # quantifier bodies extend as far right as possible, so a quantifier
    # needs brackets unless nothing follows it
    needs_parens = _level(phi) < min_level or (isinstance(phi, Quantifier) and not tail)
    if needs_parens:
        return "(" + _fmt(phi, 0, True) + ")"
    if isinstance(phi, Bot):
        return "bot"
    if isinstance(phi, Pred):
        return f"{phi.pred}({_term_text(phi.term)})"
    if isinstance(phi, Eq):
        return f"{_term_text(phi.left)} == {_term_text(phi.right)}"
    if isinstance(phi, Correctness):
        kw = "correct" if isinstance(phi, Correct) else "incorrect"
        return f"{kw}{{{', '.join(phi.preds)}}}"
    if isinstance(phi, Unary):
        tok = PREFIX_TEXT[type(phi)]
        sep = "" if tok == "!" else " "
        return tok + sep + _fmt(phi.body, PREFIX_LEVEL, tail)
    if isinstance(phi, Quantifier):
        return f"{QUANTIFIER_TEXT[type(phi)]} {phi.var}. {_fmt(phi.body, 0, True)}"
    if isinstance(phi, Binary):
        level = LEVEL[type(phi)]
        op = BINARY_TEXT[type(phi)]
        if level == 1:
            # brackets around compound operands are redundant but easier to read
            left = _fmt(phi.left, PREFIX_LEVEL if isinstance(phi.left, Binary) else level + 1, False)
            inner = isinstance(phi.right, Binary) and LEVEL[type(phi.right)] > 1
            right = _fmt(phi.right, PREFIX_LEVEL if inner else level, tail)
        else:
            left = _fmt(phi.left, level, False)
            right = _fmt(phi.right, level + 1, tail)
        return f"{left} {op} {right}"
    raise TypeError(f"unknown formula node {phi!r}")


def to_text(phi: Formula) -> str:
    """Canonical text; ``parse(to_text(phi)) == phi``."""
    return _fmt(phi, 0, True)
