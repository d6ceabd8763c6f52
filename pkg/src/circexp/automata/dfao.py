"""Deterministic finite automata with output over binary digits."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .dfa import Dfa, cylindrify, encode, quotient, reachable_mask, refine_partition, symbol_digits


class PartitionError(ValueError):
    """Acceptors do not partition the domain; ``witness`` is an offending input."""

    def __init__(self, message: str, witness: tuple[int, ...], accepted_by: list):
        super().__init__(f"{message}: input {witness} accepted by {accepted_by}")
        self.witness = witness
        self.accepted_by = accepted_by


@dataclass(frozen=True, eq=False)
class Dfao:
    """A k-DFAO with k = 2.

    ``tracks`` names the input components; an empty tuple means a single
    anonymous digit stream (the sequence automata).  State 0 is initial.
    """

    tracks: tuple[str, ...]
    delta: np.ndarray
    out: tuple[Hashable, ...]

    def __post_init__(self):
        if self.delta.ndim != 2 or self.delta.shape[1] != 1 << self.arity:
            raise ValueError("transition table does not match input arity")
        if len(self.out) != self.delta.shape[0]:
            raise ValueError("one output per state required")
        self.delta.setflags(write=False)

    @property
    def arity(self) -> int:
        return max(1, len(self.tracks))

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def output_alphabet(self) -> set:
        return set(self.out)

    def run(self, word: Iterable[int]) -> int:
        q = 0
        for sym in word:
            q = int(self.delta[q, sym])
        return q

    def __call__(self, *values: int) -> Any:
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} inputs")
        return self.out[self.run(encode(values))]

    def output_ids(self) -> np.ndarray:
        ids: dict = {}
        return np.array([ids.setdefault(o, len(ids)) for o in self.out], dtype=np.int32)

    def eval_many(self, values: np.ndarray) -> list:
        values = np.asarray(values, dtype=np.int64).reshape(-1, self.arity)
        top = int(values.max()) if values.size else 0
        states = np.zeros(values.shape[0], dtype=np.int64)
        for pos in range(top.bit_length() - 1, -1, -1):
            bits = (values >> pos) & 1
            sym = np.zeros(values.shape[0], dtype=np.int64)
            for t in range(self.arity):
                sym = (sym << 1) | bits[:, t]
            states = self.delta[states, sym]
        return [self.out[q] for q in states.tolist()]

    def is_zero_robust(self) -> bool:
        return int(self.delta[0, 0]) == 0

    def same_as(self, other: Dfao) -> bool:
        return (
            self.tracks == other.tracks
            and self.delta.shape == other.delta.shape
            and bool(np.array_equal(self.delta, other.delta))
            and self.out == other.out
        )

    def map_outputs(self, fn: Callable[[Any], Hashable]) -> Dfao:
        return Dfao(self.tracks, self.delta.copy(), tuple(fn(o) for o in self.out))

    def __repr__(self) -> str:
        return f"Dfao(tracks={self.tracks or '-'}, states={self.n_states})"


def minimize_dfao(m: Dfao) -> Dfao:
    """Minimal equivalent DFAO: reachable states, output-seeded refinement."""
    seen = reachable_mask(m.delta)
    delta = m.delta
    out = list(m.out)
    if not seen.all():
        keep = np.flatnonzero(seen)
        remap = np.full(m.n_states, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        delta = remap[delta[keep]]
        out = [out[i] for i in keep.tolist()]
    ids: dict = {}
    seed = np.array([ids.setdefault(o, len(ids)) for o in out], dtype=np.int32)
    classes = refine_partition(delta, seed)
    new_delta, rep = quotient(delta, classes)
    return Dfao(m.tracks, new_delta, tuple(out[i] for i in rep.tolist()))


def is_minimal(m: Dfao) -> bool:
    return minimize_dfao(m).n_states == m.n_states


def dfao_cross(m1: Dfao, m2: Dfao, combine: Callable[[Any, Any], Hashable] = lambda x, y: (x, y),
               check: bool = True) -> Dfao:
    """Reachable part of the cross product, built breadth-first.

    For minimal inputs the result is minimal without a further pass.
    """
    if m1.arity != m2.arity:
        raise ValueError("DFAOs read different input arities")
    if check:
        for name, m in (("first", m1), ("second", m2)):
            if not is_minimal(m):
                raise ValueError(f"{name} DFAO is not minimal")
    n2 = m2.n_states
    index = {0: 0}
    order = [0]
    rows = []
    i = 0
    d1, d2 = m1.delta, m2.delta
    k = d1.shape[1]
    while i < len(order):
        p, q = divmod(order[i], n2)
        row = []
        for sym in range(k):
            key = int(d1[p, sym]) * n2 + int(d2[q, sym])
            j = index.get(key)
            if j is None:
                j = index[key] = len(order)
                order.append(key)
            row.append(j)
        rows.append(row)
        i += 1
    out = tuple(combine(m1.out[key // n2], m2.out[key % n2]) for key in order)
    return Dfao(m1.tracks, np.array(rows, dtype=np.int32).reshape(len(order), k), out)


UNDEFINED = None


def acceptors_to_dfao(pairs: Sequence[tuple[Dfa, Hashable]], domain: Dfa | None = None,
                      undefined: Hashable = UNDEFINED) -> Dfao:
    """Fold acceptors into one DFAO whose output names the accepting acceptor.

    Acceptors are crossed in the given order.  Inputs accepted by none of
    them map to ``undefined``; an input inside ``domain`` that is accepted by
    zero or several acceptors raises :class:`PartitionError` with a witness.
    """
    if not pairs:
        raise ValueError("at least one acceptor required")
    tracks = pairs[0][0].tracks
    for dfa, _ in pairs:
        if dfa.tracks != tracks:
            raise ValueError(f"acceptors over different tracks: {dfa.tracks} vs {tracks}")
    labels = [label for _, label in pairs]
    if domain is not None:
        domain = cylindrify(domain, tracks)
    cross = pairs[0][0].as_dfao().map_outputs(lambda b: (b,))
    for dfa, _ in pairs[1:]:
        cross = dfao_cross(cross, dfa.as_dfao(), combine=lambda x, y: x + (y,), check=False)

    _check_partition(cross, domain, labels)

    def label_of(flags):
        hits = [lab for lab, f in zip(labels, flags) if f]
        return hits[0] if len(hits) == 1 else undefined

    return minimize_dfao(cross.map_outputs(label_of))


def _check_partition(cross: Dfao, domain: Dfa | None, labels: list) -> None:
    def bad(q):
        return sum(cross.out[q]) != 1

    if domain is None:
        in_domain = lambda d: True  # noqa: E731
        dom_delta = np.zeros((1, cross.delta.shape[1]), dtype=np.int32)
        dom_accept = np.array([True])
    else:
        dom_delta, dom_accept = domain.delta, domain.accept
        in_domain = lambda d: bool(dom_accept[d])  # noqa: E731
    width = cross.arity
    parent: dict = {(0, 0): None}
    queue = deque([(0, 0)])
    while queue:
        q, d = queue.popleft()
        if in_domain(d) and bad(q):
            word = []
            node = (q, d)
            while parent[node] is not None:
                node, sym = parent[node]
                word.append(sym)
            word.reverse()
            vals = [0] * width
            for sym in word:
                for t, bit in enumerate(symbol_digits(sym, width)):
                    vals[t] = (vals[t] << 1) | bit
            hits = [lab for lab, f in zip(labels, cross.out[q]) if f]
            raise PartitionError("acceptors do not partition the domain", tuple(vals), hits)
        for sym in range(cross.delta.shape[1]):
            nxt = (int(cross.delta[q, sym]), int(dom_delta[d, sym]))
            if nxt not in parent:
                parent[nxt] = ((q, d), sym)
                queue.append(nxt)
