"""Parser for existential integer sentences.

    sentence := ["exists" NAME+ "."] formula
    formula  := conj ("or" conj)*
    conj     := atom ("and" atom)*
    atom     := "(" formula ")" | expr "=" expr
    expr     := ["-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := INT | NAME | "(" expr ")"
"""

from __future__ import annotations

import keyword
import re
from typing import NamedTuple

from compiler.syntax import IAdd, IConst, IMul, IntEq, IntFormula, IVar, conj, disj

KEYWORDS = {"exists", "and", "or", "not", "forall"}

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


class Token(NamedTuple):
    kind: str  # "int", "name", "op", "end"
    value: str
    offset: int


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        number, name, other = m.groups()
        offset = m.start(m.lastindex) if m.lastindex else m.end()
        if number is not None:
            tokens.append(Token("int", number, offset))
        elif name is not None:
            tokens.append(Token("name", name, offset))
        elif other is not None:
            if other not in "+-*=().":
                line, col = _position(text, offset)
                raise ParseError(f"unexpected character {other!r}", line, col)
            tokens.append(Token("op", other, offset))
        pos = m.end()
    tokens.append(Token("end", "", len(text.rstrip())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.declared: set[str] = set()

    # ── token helpers ──

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.tok
        line, col = _position(self.text, token.offset)
        return ParseError(message, line, col)

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.tok
        return tok.kind == kind and (value is None or tok.value == value)

    def expect(self, kind: str, value: str | None = None) -> Token:
        if not self.at(kind, value):
            wanted = value or kind
            found = self.tok.value or "end of input"
            raise self.error(f"expected {wanted!r}, found {found!r}")
        tok = self.tok
        self.pos += 1
        return tok

    # ── grammar ──

    def sentence(self) -> IntFormula:
        variables: list[str] = []
        if self.at("name", "exists"):
            self.pos += 1
            while self.at("name"):
                tok = self.tok
                self._check_name(tok)
                if tok.value in self.declared:
                    raise self.error(f"variable {tok.value!r} declared twice", tok)
                self.declared.add(tok.value)
                variables.append(tok.value)
                self.pos += 1
            if not variables:
                raise self.error("expected a variable name after 'exists'")
            self.expect("op", ".")
        body = self.formula()
        if not self.at("end"):
            raise self.error(f"unexpected {self.tok.value!r}")
        return IntFormula(tuple(variables), body)

    def _check_name(self, tok: Token) -> None:
        if tok.value in KEYWORDS or keyword.iskeyword(tok.value):
            raise self.error(f"{tok.value!r} is reserved", tok)
        if not _NAME_RE.fullmatch(tok.value):
            raise self.error(f"invalid variable name {tok.value!r}", tok)

    def formula(self):
        parts = [self.conjunction()]
        while self.at("name", "or"):
            self.pos += 1
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self):
        parts = [self.atom()]
        while self.at("name", "and"):
            self.pos += 1
            parts.append(self.atom())
        return conj(*parts)

    def atom(self):
        if self.at("name", "not"):
            raise self.error("negation is not supported")
        if self.at("name", "forall"):
            raise self.error("universal quantifiers are not supported")
        if self.at("op", "("):
            saved = self.pos
            self.pos += 1
            try:
                inner = self.formula()
                self.expect("op", ")")
            except ParseError:
                inner = None
            if inner is not None and not (self.at("op", "=") or self.at("op", "+") or self.at("op", "*") or self.at("op", "-")):
                return inner
            self.pos = saved
        left = self.expr()
        self.expect("op", "=")
        right = self.expr()
        return IntEq(left, right)

    def expr(self):
        negate = False
        if self.at("op", "-"):
            self.pos += 1
            negate = True
        out = self.term()
        if negate:
            out = _negated(out)
        while self.at("op", "+") or self.at("op", "-"):
            op = self.tok.value
            self.pos += 1
            rhs = self.term()
            out = IAdd(out, rhs if op == "+" else _negated(rhs))
        return out

    def term(self):
        out = self.factor()
        while self.at("op", "*"):
            self.pos += 1
            out = IMul(out, self.factor())
        return out

    def factor(self):
        tok = self.tok
        if tok.kind == "int":
            self.pos += 1
            return IConst(int(tok.value))
        if tok.kind == "name":
            if tok.value in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.value!r}")
            if tok.value not in self.declared:
                raise self.error(f"undeclared variable {tok.value!r}")
            self.pos += 1
            return IVar(tok.value)
        if self.at("op", "("):
            self.pos += 1
            inner = self.expr()
            self.expect("op", ")")
            return inner
        found = tok.value or "end of input"
        raise self.error(f"expected a number, variable or '(', found {found!r}")


def _negated(expr):
    if isinstance(expr, IConst):
        return IConst(-expr.value)
    return IMul(IConst(-1), expr)


def parse(text: str) -> IntFormula:
    """IntFormula for the sentence, or ParseError with line and column."""
    return _Parser(text).sentence()
