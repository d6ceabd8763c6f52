"""Syntax trees for first-order formulas over base-2 automatic sequences."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left}+{self.right})"


@dataclass(frozen=True)
class Sub:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left}-{self.right})"


@dataclass(frozen=True)
class Scale:
    factor: int
    term: "Term"

    def __post_init__(self):
        if self.factor < 1:
            raise ValueError("scale factors are positive literals")

    def __str__(self):
        return f"{self.factor}*{self.term}"


Term = Union[Var, Const, Add, Sub, Scale]

# atoms


@dataclass(frozen=True)
class Compare:
    left: Term
    op: str
    right: Term

    def __str__(self):
        return f"{self.left}{self.op}{self.right}"


@dataclass(frozen=True)
class Index:
    seq: str
    term: Term

    def __str__(self):
        return f"{self.seq}[{self.term}]"


@dataclass(frozen=True)
class SeqCompare:
    """``seq1[t1] op seq2[t2]`` or ``seq[t] op letter``; op is ``=`` or ``!=``."""

    left: Union[Index, Const]
    op: str
    right: Union[Index, Const]

    def __post_init__(self):
        if self.op not in ("=", "!="):
            raise ValueError("sequence letters compare with = or != only")
        if not (isinstance(self.left, Index) or isinstance(self.right, Index)):
            raise ValueError("sequence comparison needs an indexed side")

    def __str__(self):
        return f"{self.left}{self.op}{self.right}"


# connectives


@dataclass(frozen=True)
class Bool:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return f"~{self.body}"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} => {self.right})"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} <=> {self.right})"


@dataclass(frozen=True)
class Exists:
    vars: tuple[str, ...]
    body: "Formula"

    def __str__(self):
        return f"(E {','.join(self.vars)} {self.body})"


@dataclass(frozen=True)
class Forall:
    vars: tuple[str, ...]
    body: "Formula"

    def __str__(self):
        return f"(A {','.join(self.vars)} {self.body})"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple[Term, ...]

    def __str__(self):
        return f"${self.name}({','.join(map(str, self.args))})"


Formula = Union[Compare, SeqCompare, Bool, Not, And, Or, Implies, Iff, Exists, Forall, Call]


def term_vars(t) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, (Add, Sub)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Scale):
        return term_vars(t.term)
    if isinstance(t, Index):
        return term_vars(t.term)
    raise TypeError(f"not a term: {t!r}")


def free_vars(f) -> set[str]:
    if isinstance(f, (Compare, SeqCompare)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Bool):
        return set()
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - set(f.vars)
    if isinstance(f, Call):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    raise TypeError(f"not a formula: {f!r}")


def calls(f) -> set[str]:
    """Names of stored predicates referenced by ``f``."""
    if isinstance(f, Call):
        return {f.name}
    if isinstance(f, Not):
        return calls(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return calls(f.left) | calls(f.right)
    if isinstance(f, (Exists, Forall)):
        return calls(f.body)
    return set()


def conjoin(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjoin(*parts):
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out
