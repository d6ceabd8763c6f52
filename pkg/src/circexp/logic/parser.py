"""Parser for the Walnut-style command dialect.

Scripts hold ``def name "formula":`` and ``eval name "formula":`` commands
(``;`` also ends a command), ``#sequence <id>`` directives, and ``#``
comment lines.  Quoted formulas may span lines.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (Add, And, Bool, Call, Compare, Const, Exists, Forall, Iff, Implies, Index, Not, Or,
                  Scale, SeqCompare, Sub, Var)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<call>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z_][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<op><=>|=>|!=|<=|>=|[=<>&|~()\[\],+\-*])
    """,
    re.VERBOSE,
)

RELOPS = ("=", "!=", "<", "<=", ">", ">=")


def tokenize(text: str, base: int = 0, source: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise _error(f"unexpected character {text[pos]!r}", source or text, base + pos)
        kind = m.lastgroup
        word = m.group()
        if kind == "upper":
            # A/E followed by anything but '[' is a quantifier; glue like "Aj" splits
            nxt = text[m.end():].lstrip()
            if word[0] in "AE" and not (len(word) == 1 and nxt.startswith("[")):
                tokens.append(Token("quant", word[0], base + pos))
                rest = word[1:]
                if rest:
                    if not re.fullmatch(r"[a-z_][A-Za-z0-9_]*", rest):
                        raise _error(f"bad quantified variable {rest!r}", source or text, base + pos + 1)
                    tokens.append(Token("ident", rest, base + pos + 1))
                pos = m.end()
                continue
            kind = "seq"
        if kind != "ws":
            tokens.append(Token(kind, word, base + pos))
        pos = m.end()
    tokens.append(Token("eof", "", base + len(text)))
    return tokens


def _line_col(source: str, offset: int) -> tuple[int, int]:
    line = source.count("\n", 0, offset) + 1
    col = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _error(message: str, source: str, offset: int) -> ParseError:
    line, col = _line_col(source, offset)
    return ParseError(message, line, col)


class _Parser:
    def __init__(self, tokens: list[Token], source: str):
        self.toks = tokens
        self.i = 0
        self.source = source

    # helpers
    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            tok = self.peek()
            want = text or kind
            raise _error(f"expected {want!r}, found {tok.text or 'end of input'!r}", self.source, tok.offset)
        return self.next()

    # formulas, loosest first
    def formula(self):
        left = self.implies()
        while self.at("op", "<=>"):
            self.next()
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disj()
        if self.at("op", "=>"):
            self.next()
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.at("op", "|"):
            self.next()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("op", "&"):
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.at("op", "~"):
            self.next()
            return Not(self.unary())
        if self.at("quant"):
            q = self.next().text
            names = [self.expect("ident").text]
            while self.at("op", ","):
                self.next()
                names.append(self.expect("ident").text)
            body = self.formula()
            return (Exists if q == "E" else Forall)(tuple(names), body)
        return self.primary()

    def primary(self):
        if self.at("op", "("):
            save = self.i
            try:
                self.next()
                inner = self.formula()
                self.expect("op", ")")
                if not (self.peek().kind == "op" and self.peek().text in RELOPS + ("+", "-", "*")):
                    return inner
            except ParseError:
                pass
            self.i = save
        if self.at("ident", "true") or self.at("ident", "false"):
            return Bool(self.next().text == "true")
        if self.at("call"):
            name = self.next().text[1:]
            self.expect("op", "(")
            args = [self.term()]
            while self.at("op", ","):
                self.next()
                args.append(self.term())
            self.expect("op", ")")
            return Call(name, tuple(args))
        return self.atom()

    def atom(self):
        left = self.side()
        tok = self.peek()
        if not (tok.kind == "op" and tok.text in RELOPS):
            raise _error(f"expected a relation, found {tok.text or 'end of input'!r}", self.source, tok.offset)
        op = self.next().text
        right = self.side()
        if isinstance(left, Index) or isinstance(right, Index):
            for side in (left, right):
                if not isinstance(side, (Index, Const)):
                    raise _error("a sequence letter can only be compared with a letter or literal",
                                 self.source, tok.offset)
            if op not in ("=", "!="):
                raise _error("sequence letters compare with = or != only", self.source, tok.offset)
            return SeqCompare(left, op, right)
        return Compare(left, op, right)

    def side(self):
        if self.at("seq"):
            name = self.next().text
            self.expect("op", "[")
            t = self.term()
            self.expect("op", "]")
            return Index(name, t)
        return self.term()

    # terms
    def term(self):
        left = self.product()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            right = self.product()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def product(self):
        left = self.factor()
        while self.at("op", "*"):
            star = self.next()
            right = self.factor()
            if isinstance(left, Const) and left.value > 0:
                left = Scale(left.value, right)
            elif isinstance(right, Const) and right.value > 0:
                left = Scale(right.value, left)
            elif isinstance(left, Const) or isinstance(right, Const):
                left = Const(0)
            else:
                raise _error("multiplication needs a literal factor", self.source, star.offset)
        return left

    def factor(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return Const(int(tok.text))
        if tok.kind == "ident":
            self.next()
            return Var(tok.text)
        if self.at("op", "("):
            self.next()
            t = self.term()
            self.expect("op", ")")
            return t
        if tok.kind == "seq":
            raise _error(f"unknown sequence symbol usage {tok.text!r}", self.source, tok.offset)
        raise _error(f"expected a term, found {tok.text or 'end of input'!r}", self.source, tok.offset)


def parse_formula(text: str, source: str | None = None, base: int = 0):
    """Parse one formula; ``source``/``base`` place it inside a script for error positions."""
    src = source if source is not None else text
    p = _Parser(tokenize(text, base, src), src)
    f = p.formula()
    if not p.at("eof"):
        tok = p.peek()
        raise _error(f"unexpected {tok.text!r}", src, tok.offset)
    return f


# scripts


@dataclass(frozen=True)
class Define:
    name: str
    formula: object
    text: str
    line: int


@dataclass(frozen=True)
class Evaluate:
    name: str
    formula: object
    text: str
    line: int


@dataclass(frozen=True)
class UseSequence:
    seq: str
    line: int


_COMMAND_RE = re.compile(r'(def|eval)\s+([A-Za-z_][A-Za-z0-9_]*)\s+"([^"]*)"\s*[:;]', re.S)


def parse_script(text: str) -> list:
    commands: list = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] == "#":
            end = text.find("\n", pos)
            end = n if end < 0 else end
            line_text = text[pos:end].strip()
            m = re.fullmatch(r"#sequence\s+(\S+)", line_text)
            if m:
                commands.append(UseSequence(m.group(1), _line_col(text, pos)[0]))
            pos = end
            continue
        m = _COMMAND_RE.match(text, pos)
        if not m:
            raise _error("expected 'def name \"formula\":' or 'eval name \"formula\":'", text, pos)
        kind, name, body = m.group(1), m.group(2), m.group(3)
        f = parse_formula(body, source=text, base=m.start(3))
        line = _line_col(text, pos)[0]
        commands.append((Define if kind == "def" else Evaluate)(name, f, body, line))
        pos = m.end()
    return commands
