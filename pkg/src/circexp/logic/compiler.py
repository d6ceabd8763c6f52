"""Compile formulas to multi-track automata."""
from __future__ import annotations

import hashlib
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from ..automata import dfa as A
from ..automata.arith import linear_dfa
from ..automata.dfa import Dfa
from ..automata.dfao import Dfao
from ..automata.textio import dumps, loads
from ..sequences import SEQUENCES
from .ast import (Add, And, Bool, Call, Compare, Const, Exists, Forall, Iff, Implies, Index, Not, Or,
                  Scale, SeqCompare, Sub, Var, calls, free_vars)

log = logging.getLogger(__name__)

DEFAULT_BINDINGS = {"T": "tm"}


class CompileError(ValueError):
    pass


@dataclass
class Predicate:
    name: str
    params: tuple[str, ...]
    dfa: Dfa
    key: str
    elapsed: float = 0.0


@dataclass
class PredicateStore:
    """Named compiled predicates; optionally backed by an on-disk cache."""

    bindings: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_BINDINGS))
    cache_dir: Path | None = None
    predicates: dict[str, Predicate] = field(default_factory=dict)

    def __contains__(self, name: str) -> bool:
        return name in self.predicates

    def __getitem__(self, name: str) -> Predicate:
        try:
            return self.predicates[name]
        except KeyError:
            raise CompileError(f"unresolved predicate ${name}") from None

    def content_key(self, f) -> str:
        """Hash of the formula, sequence bindings and every called predicate."""
        h = hashlib.sha256()
        h.update(repr(f).encode())
        h.update(repr(sorted(self.bindings.items())).encode())
        for name in sorted(calls(f)):
            h.update(f"{name}={self[name].key}".encode())
        return h.hexdigest()

    def define(self, name: str, f) -> Predicate:
        if name in self.predicates:
            raise CompileError(f"predicate {name!r} already defined")
        key = self.content_key(f)
        start = time.perf_counter()
        dfa = self._load(key)
        if dfa is None:
            dfa = compile_formula(f, self)
            self._save(key, dfa)
        pred = Predicate(name, dfa.tracks, dfa, key, time.perf_counter() - start)
        self.predicates[name] = pred
        log.info("def %s: %d states (%.2fs)", name, dfa.n_states, pred.elapsed)
        return pred

    def _path(self, key: str) -> Path | None:
        if self.cache_dir is None:
            return None
        return Path(self.cache_dir) / "predicates" / f"{key}.txt"

    def _load(self, key: str) -> Dfa | None:
        path = self._path(key)
        if path is not None and path.exists():
            return loads(path.read_text(encoding="utf-8"))
        return None

    def _save(self, key: str, dfa: Dfa) -> None:
        path = self._path(key)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(dumps(dfa), encoding="utf-8")
            tmp.replace(path)


def define(store: PredicateStore, name: str, f) -> PredicateStore:
    store.define(name, f)
    return store


def sequence_atom(left: tuple[Dfao, str] | int, op: str, right: tuple[Dfao, str] | int) -> Dfa:
    """Automaton for ``seq1[x] op seq2[y]`` (either side may be a letter)."""
    sides = [s for s in (left, right) if not isinstance(s, int)]
    tracks = tuple(sorted({name for _, name in sides}))
    pos = [tracks.index(name) for _, name in sides]
    machines = [m for m, _ in sides]
    want_equal = op == "="

    def step(state, digits):
        return tuple(int(m.delta[q, digits[p]]) for m, q, p in zip(machines, state, pos))

    def accepting(state):
        vals = iter(m.out[q] for m, q in zip(machines, state))
        lhs = left if isinstance(left, int) else next(vals)
        rhs = right if isinstance(right, int) else next(vals)
        return (lhs == rhs) == want_equal

    return A.explore(tracks, tuple(0 for _ in machines), step, accepting)


class _Compiler:
    def __init__(self, store: PredicateStore):
        self.store = store
        self.counter = 0

    def fresh(self) -> str:
        self.counter += 1
        return f"_t{self.counter}"

    # terms ---------------------------------------------------------------
    def linear(self, t, sides: list[Dfa], fresh: list[str]) -> tuple[dict[str, int], int]:
        if isinstance(t, Var):
            return {t.name: 1}, 0
        if isinstance(t, Const):
            return {}, t.value
        if isinstance(t, Add):
            c1, k1 = self.linear(t.left, sides, fresh)
            c2, k2 = self.linear(t.right, sides, fresh)
            return _lin_add(c1, c2, 1), k1 + k2
        if isinstance(t, Scale):
            c, k = self.linear(t.term, sides, fresh)
            return {v: t.factor * x for v, x in c.items()}, t.factor * k
        if isinstance(t, Sub):
            # u = left - right  is  u + right = left  over the naturals
            c1, k1 = self.linear(t.left, sides, fresh)
            c2, k2 = self.linear(t.right, sides, fresh)
            u = self.fresh()
            fresh.append(u)
            coeffs = _lin_add(_lin_add({u: 1}, c2, 1), c1, -1)
            sides.append(linear_dfa(coeffs, k2 - k1, "="))
            return {u: 1}, 0
        raise CompileError(f"not a term: {t!r}")

    def bind_term(self, t, sides: list[Dfa], fresh: list[str]) -> str:
        """A track name carrying the value of ``t``."""
        if isinstance(t, Var):
            return t.name
        c, k = self.linear(t, sides, fresh)
        u = self.fresh()
        fresh.append(u)
        sides.append(linear_dfa(_lin_add({u: 1}, c, -1), -k, "="))
        return u

    def finish(self, core: Dfa, sides: list[Dfa], fresh: list[str]) -> Dfa:
        if not sides:
            return core
        out = A.conjunction([core] + sides)
        return A.project_all(out, fresh)

    # formulas ------------------------------------------------------------
    def compile(self, f) -> Dfa:
        if isinstance(f, Compare):
            sides: list[Dfa] = []
            fresh: list[str] = []
            c1, k1 = self.linear(f.left, sides, fresh)
            c2, k2 = self.linear(f.right, sides, fresh)
            atom = linear_dfa(_lin_add(c1, c2, -1), k1 - k2, f.op, tracks=free_vars(f))
            return self.finish(atom, sides, fresh)
        if isinstance(f, SeqCompare):
            sides, fresh = [], []
            ends = []
            for side in (f.left, f.right):
                if isinstance(side, Const):
                    ends.append(side.value)
                else:
                    ends.append((self.sequence(side.seq), self.bind_term(side.term, sides, fresh)))
            return self.finish(sequence_atom(ends[0], f.op, ends[1]), sides, fresh)
        if isinstance(f, Bool):
            return A.constant_dfa((), f.value)
        if isinstance(f, Not):
            return A.complement(self.compile(f.body))
        if isinstance(f, And):
            return A.conjunction(self.compile(p) for p in _flatten(f, And))
        if isinstance(f, Or):
            parts = [self.compile(p) for p in _flatten(f, Or)]
            out = parts[0]
            for p in parts[1:]:
                out = A.product(out, p, "or")
            return out
        if isinstance(f, Implies):
            return A.product(self.compile(f.left), self.compile(f.right), "implies")
        if isinstance(f, Iff):
            return A.product(self.compile(f.left), self.compile(f.right), "iff")
        if isinstance(f, Exists):
            return A.project_all(self.compile(f.body), f.vars)
        if isinstance(f, Forall):
            inner = A.complement(self.compile(f.body))
            return A.complement(A.project_all(inner, f.vars))
        if isinstance(f, Call):
            return self.call(f)
        raise CompileError(f"cannot compile {f!r}")

    def sequence(self, symbol: str) -> Dfao:
        seq = self.store.bindings.get(symbol, symbol)
        if seq not in SEQUENCES:
            raise CompileError(f"unknown sequence symbol {symbol!r}")
        return SEQUENCES[seq]

    def call(self, f: Call) -> Dfa:
        pred = self.store[f.name]
        if len(f.args) != len(pred.params):
            raise CompileError(
                f"${f.name} takes {len(pred.params)} arguments {pred.params}, got {len(f.args)}")
        sides: list[Dfa] = []
        fresh: list[str] = []
        mapping: dict[str, str] = {}
        used: set[str] = set()
        for param, arg in zip(pred.params, f.args):
            if isinstance(arg, Var) and arg.name not in used:
                mapping[param] = arg.name
                used.add(arg.name)
                continue
            u = self.fresh()
            fresh.append(u)
            if isinstance(arg, Var):
                sides.append(linear_dfa({u: 1, arg.name: -1}, 0, "="))
            else:
                c, k = self.linear(arg, sides, fresh)
                sides.append(linear_dfa(_lin_add({u: 1}, c, -1), -k, "="))
            mapping[param] = u
        core = A.rename(pred.dfa, mapping)
        return self.finish(core, sides, fresh)


def _flatten(f, cls) -> list:
    if isinstance(f, cls):
        return _flatten(f.left, cls) + _flatten(f.right, cls)
    return [f]


def _lin_add(a: Mapping[str, int], b: Mapping[str, int], sign: int) -> dict[str, int]:
    out = dict(a)
    for v, c in b.items():
        out[v] = out.get(v, 0) + sign * c
    return out


def compile_formula(f, store: PredicateStore | None = None) -> Dfa:
    """Minimal automaton over exactly the free variables of ``f``."""
    store = store if store is not None else PredicateStore()
    out = _Compiler(store).compile(f)
    want = tuple(sorted(free_vars(f)))
    if out.tracks != want:
        out = A.cylindrify(out, want)
    return out


def eval_closed(f, store: PredicateStore | None = None) -> bool:
    fv = free_vars(f)
    if fv:
        raise CompileError(f"formula has free variables {sorted(fv)}")
    return bool(compile_formula(f, store).accept[0])


def counterexample(f, store: PredicateStore | None = None) -> dict[str, int] | None:
    """For a false closed ``A vars body``, a smallest assignment falsifying the body."""
    if not isinstance(f, Forall) or free_vars(f):
        return None
    body = compile_formula(f.body, store)
    word = A.shortest_accepted_word(A.complement(body))
    if word is None:
        return None
    return dict(zip(body.tracks, A.decode(word, body.width)))
