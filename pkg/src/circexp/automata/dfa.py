"""Multi-track binary automata.

A ``Dfa`` reads words over bit-tuples, most significant digit first.  Each
track carries one natural number; shorter numbers are left-padded with zeros
so that every track has the same length.  Symbols are encoded as integers:
for tracks ``(t0, ..., tk-1)`` the digit of ``t0`` is the most significant bit
of the symbol, so numeric symbol order is the lexicographic tuple order.

State 0 is always the initial state.  Every operation returns a minimal
automaton in canonical breadth-first numbering, so automata with equal
languages over equal tracks are structurally identical.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)

_STATE_CEILING: list[int | None] = [None]
_MEMORY_CEILING: list[int | None] = [None]
_LARGEST = [0]

BOOL_OPS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "and": lambda x, y: x & y,
    "or": lambda x, y: x | y,
    "implies": lambda x, y: ~x | y,
    "iff": lambda x, y: x == y,
    "xor": lambda x, y: x != y,
}


class ResourceCeilingError(RuntimeError):
    """An intermediate automaton exceeded the configured state ceiling."""


def set_state_ceiling(limit: int | None) -> None:
    """Limit the size of any intermediate automaton (None disables)."""
    _STATE_CEILING[0] = limit


def set_memory_ceiling(limit_bytes: int | None) -> None:
    """Abort constructions once peak resident memory passes ``limit_bytes``."""
    _MEMORY_CEILING[0] = limit_bytes


def largest_intermediate(reset: bool = False) -> int:
    """Largest intermediate state count seen since the last reset."""
    value = _LARGEST[0]
    if reset:
        _LARGEST[0] = 0
    return value


def _peak_rss() -> int:
    import resource

    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def _check_ceiling(count: int) -> None:
    if count > _LARGEST[0]:
        _LARGEST[0] = count
    limit = _STATE_CEILING[0]
    if limit is not None and count > limit:
        raise ResourceCeilingError(f"intermediate automaton exceeded {limit} states")
    mem = _MEMORY_CEILING[0]
    if mem is not None and _peak_rss() > mem:
        raise ResourceCeilingError(f"memory use exceeded {mem} bytes")


# --------------------------------------------------------------------------
# symbol helpers


def symbol_digits(symbol: int, width: int) -> tuple[int, ...]:
    return tuple((symbol >> (width - 1 - t)) & 1 for t in range(width))


def digits_symbol(digits: Sequence[int]) -> int:
    s = 0
    for d in digits:
        s = (s << 1) | d
    return s


def symbol_map(src: Sequence[str], dst: Sequence[str]) -> np.ndarray:
    """For every symbol over ``dst`` tracks, the symbol over ``src`` (a subset)."""
    k = len(dst)
    pos = [dst.index(t) for t in src]
    out = np.zeros(1 << k, dtype=np.int64)
    sym = np.arange(1 << k, dtype=np.int64)
    for t in pos:
        out = (out << 1) | ((sym >> (k - 1 - t)) & 1)
    return out


def encode(values: Sequence[int], length: int | None = None) -> list[int]:
    """Column word (list of symbols) for a tuple of naturals."""
    if any(v < 0 for v in values):
        raise ValueError("values must be natural numbers")
    width = len(values)
    need = max((int(v).bit_length() for v in values), default=0)
    if length is None:
        length = need
    elif length < need:
        raise ValueError("length too short for values")
    word = []
    for pos in range(length - 1, -1, -1):
        sym = 0
        for v in values:
            sym = (sym << 1) | ((int(v) >> pos) & 1)
        word.append(sym)
    if width == 0:
        return [0] * length
    return word


def decode(word: Sequence[int], width: int) -> tuple[int, ...]:
    vals = [0] * width
    for sym in word:
        for t in range(width):
            vals[t] = (vals[t] << 1) | ((sym >> (width - 1 - t)) & 1)
    return tuple(vals)


# --------------------------------------------------------------------------
# core arrays: reachability, refinement, canonical numbering


def reachable_mask(delta: np.ndarray, start: int = 0) -> np.ndarray:
    seen = np.zeros(delta.shape[0], dtype=bool)
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        nxt = np.unique(delta[frontier].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def refine_partition(delta: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Coarsest congruence refining ``classes`` (Moore iteration)."""
    n = delta.shape[0]
    if n == 0:
        return classes
    _, classes = np.unique(classes, return_inverse=True)
    classes = classes.astype(np.int32).ravel()
    count = int(classes.max()) + 1
    while True:
        sig = np.empty((n, delta.shape[1] + 1), dtype=np.int32)
        sig[:, 0] = classes
        sig[:, 1:] = classes[delta]
        rows = np.ascontiguousarray(sig).view(np.dtype((np.void, sig.dtype.itemsize * sig.shape[1])))
        _, new = np.unique(rows.ravel(), return_inverse=True)
        new = new.astype(np.int32).ravel()
        new_count = int(new.max()) + 1
        classes = new
        if new_count == count:
            return classes
        count = new_count


def canonical_order(delta: np.ndarray, start: int = 0) -> np.ndarray:
    """BFS position of every state reachable from ``start`` (-1 when unreachable)."""
    n = delta.shape[0]
    pos = np.full(n, -1, dtype=np.int64)
    pos[start] = 0
    count = 1
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        succ = delta[frontier].ravel()
        cand = succ[pos[succ] < 0]
        if cand.size == 0:
            break
        _, first = np.unique(cand, return_index=True)
        fresh = cand[np.sort(first)]
        pos[fresh] = np.arange(count, count + fresh.size)
        count += fresh.size
        frontier = fresh
    return pos


def quotient(delta: np.ndarray, classes: np.ndarray, start: int = 0):
    """Collapse ``classes`` and renumber canonically from the class of ``start``.

    Returns ``(new_delta, rep)`` with ``rep[i]`` an original member of new state ``i``.
    """
    n_cls = int(classes.max()) + 1
    rep = np.empty(n_cls, dtype=np.int64)
    rep[classes] = np.arange(delta.shape[0])
    qdelta = classes[delta[rep]]
    pos = canonical_order(qdelta, int(classes[start]))
    reached = np.flatnonzero(pos >= 0)
    order = reached[np.argsort(pos[reached])]
    new_delta = pos[qdelta[order]].astype(np.int32)
    return new_delta, rep[order]


# --------------------------------------------------------------------------
# Dfa


@dataclass(frozen=True, eq=False)
class Dfa:
    """Total DFA over bit-tuples; state 0 is initial."""

    tracks: tuple[str, ...]
    delta: np.ndarray
    accept: np.ndarray

    def __post_init__(self):
        if len(set(self.tracks)) != len(self.tracks):
            raise ValueError(f"duplicate track names: {self.tracks}")
        if self.delta.ndim != 2 or self.delta.shape[1] != 1 << len(self.tracks):
            raise ValueError("transition table does not match track count")
        if self.accept.shape != (self.delta.shape[0],):
            raise ValueError("acceptance vector does not match state count")
        self.delta.setflags(write=False)
        self.accept.setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def width(self) -> int:
        return len(self.tracks)

    @property
    def alphabet_size(self) -> int:
        return 1 << len(self.tracks)

    def dead_states(self) -> np.ndarray:
        """Non-accepting sinks."""
        loops = np.all(self.delta == np.arange(self.n_states)[:, None], axis=1)
        return loops & ~self.accept

    def universal_states(self) -> np.ndarray:
        loops = np.all(self.delta == np.arange(self.n_states)[:, None], axis=1)
        return loops & self.accept

    @property
    def live_states(self) -> int:
        """State count with the rejecting sink left out."""
        return self.n_states - int(self.dead_states().sum())

    @property
    def reported_states(self) -> int:
        """State count as usually quoted: a rejecting sink is not counted
        unless it is the initial state (so the empty language has 1 state)."""
        dead = self.dead_states()
        return self.n_states - int(dead[1:].sum())

    def run(self, word: Iterable[int]) -> int:
        q = 0
        for sym in word:
            q = int(self.delta[q, sym])
        return q

    def accepts(self, *values: int, **named: int) -> bool:
        """Acceptance of a value tuple given positionally (track order) or by name."""
        if named:
            if values:
                raise TypeError("give values positionally or by name, not both")
            values = tuple(named[t] for t in self.tracks)
        if len(values) != self.width:
            raise ValueError(f"expected {self.width} values for tracks {self.tracks}")
        return bool(self.accept[self.run(encode(values))])

    def accepts_many(self, values: np.ndarray, pad: int = 0) -> np.ndarray:
        """Vectorised acceptance for an (N, width) array of naturals."""
        values = np.asarray(values, dtype=np.int64).reshape(-1, self.width)
        top = int(values.max()) if values.size else 0
        length = top.bit_length() + pad
        states = np.zeros(values.shape[0], dtype=np.int64)
        for pos in range(length - 1, -1, -1):
            bits = (values >> pos) & 1
            sym = np.zeros(values.shape[0], dtype=np.int64)
            for t in range(self.width):
                sym = (sym << 1) | bits[:, t]
            states = self.delta[states, sym]
        return self.accept[states]

    def is_empty(self) -> bool:
        return not bool(self.accept[reachable_mask(self.delta)].any())

    def same_as(self, other: Dfa) -> bool:
        """Structural identity (same tracks, numbering, transitions, acceptance)."""
        return (
            self.tracks == other.tracks
            and self.delta.shape == other.delta.shape
            and bool(np.array_equal(self.delta, other.delta))
            and bool(np.array_equal(self.accept, other.accept))
        )

    def as_dfao(self):
        from .dfao import Dfao

        return Dfao(self.tracks, self.delta.copy(), tuple(bool(a) for a in self.accept))

    def __repr__(self) -> str:
        return f"Dfa(tracks={self.tracks}, states={self.n_states})"


@dataclass(frozen=True, eq=False)
class Nfa:
    """Nondeterministic multi-track automaton: ``succ[q][sym]`` is a tuple of states."""

    tracks: tuple[str, ...]
    succ: tuple[tuple[tuple[int, ...], ...], ...]
    initial: frozenset[int]
    accept: frozenset[int]

    def determinize(self) -> Dfa:
        k = 1 << len(self.tracks)
        start = tuple(sorted(self.initial))
        index = {start: 0}
        queue = deque([start])
        rows: list[list[int]] = []
        acc: list[bool] = []
        while queue:
            cur = queue.popleft()
            row = []
            for sym in range(k):
                nxt = tuple(sorted({r for q in cur for r in self.succ[q][sym]}))
                if nxt not in index:
                    index[nxt] = len(index)
                    _check_ceiling(len(index))
                    queue.append(nxt)
                row.append(index[nxt])
            rows.append(row)
            acc.append(any(q in self.accept for q in cur))
        return minimize_dfa(Dfa(self.tracks, np.array(rows, dtype=np.int32), np.array(acc, dtype=bool)))


# --------------------------------------------------------------------------
# constructors


def from_function(tracks: Sequence[str], n_states: int, step: Callable[[int, tuple[int, ...]], int],
                  accepting: Callable[[int], bool]) -> Dfa:
    tracks = tuple(tracks)
    k = len(tracks)
    delta = np.array(
        [[step(q, symbol_digits(s, k)) for s in range(1 << k)] for q in range(n_states)], dtype=np.int32
    ).reshape(n_states, 1 << k)
    acc = np.array([bool(accepting(q)) for q in range(n_states)], dtype=bool)
    return minimize_dfa(Dfa(tracks, delta, acc))


def constant_dfa(tracks: Sequence[str], value: bool) -> Dfa:
    tracks = tuple(sorted(tracks))
    return Dfa(tracks, np.zeros((1, 1 << len(tracks)), dtype=np.int32), np.array([value]))


def explore(tracks: Sequence[str], start, step: Callable[[object, tuple[int, ...]], object],
            accepting: Callable[[object], bool], minimize: bool = True) -> Dfa:
    """Build a DFA by exploring hashable states from ``start``."""
    tracks = tuple(tracks)
    k = len(tracks)
    digits = [symbol_digits(s, k) for s in range(1 << k)]
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        q = order[i]
        row = []
        for d in digits:
            r = step(q, d)
            if r not in index:
                index[r] = len(order)
                order.append(r)
            row.append(index[r])
        rows.append(row)
        i += 1
    dfa = Dfa(tracks, np.array(rows, dtype=np.int32).reshape(len(order), 1 << k),
              np.array([bool(accepting(q)) for q in order], dtype=bool))
    return minimize_dfa(dfa) if minimize else dfa


# --------------------------------------------------------------------------
# operations


def minimize_dfa(a: Dfa) -> Dfa:
    """Minimal equivalent DFA in canonical numbering (idempotent)."""
    seen = reachable_mask(a.delta)
    delta = a.delta
    accept = a.accept
    if not seen.all():
        keep = np.flatnonzero(seen)
        remap = np.full(a.n_states, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        delta = remap[delta[keep]]
        accept = accept[keep]
    classes = refine_partition(delta, accept.astype(np.int32))
    new_delta, rep = quotient(delta, classes)
    return Dfa(a.tracks, new_delta, accept[rep].copy())


def reorder_tracks(a: Dfa, tracks: Sequence[str]) -> Dfa:
    """Same relation presented with a permuted track order."""
    tracks = tuple(tracks)
    if sorted(tracks) != sorted(a.tracks):
        raise ValueError(f"track sets differ: {a.tracks} vs {tracks}")
    if tracks == a.tracks:
        return a
    mapping = symbol_map(a.tracks, tracks)
    return minimize_dfa(Dfa(tracks, a.delta[:, mapping], a.accept.copy()))


def rename(a: Dfa, mapping: dict[str, str]) -> Dfa:
    """Rename tracks (injective); result tracks are re-sorted."""
    new = tuple(mapping.get(t, t) for t in a.tracks)
    if len(set(new)) != len(new):
        raise ValueError("renaming would merge tracks")
    order = tuple(sorted(new))
    renamed = Dfa(new, a.delta.copy(), a.accept.copy())
    if order == new:
        return minimize_dfa(renamed)
    return reorder_tracks(renamed, order)


def cylindrify(a: Dfa, tracks: Sequence[str]) -> Dfa:
    """Extend ``a`` to a superset of tracks that it ignores."""
    tracks = tuple(sorted(set(tracks) | set(a.tracks)))
    if tracks == a.tracks:
        return a
    mapping = symbol_map(a.tracks, tracks)
    return minimize_dfa(Dfa(tracks, a.delta[:, mapping], a.accept.copy()))


def _absorbing(a: Dfa, op: Callable) -> tuple[np.ndarray, np.ndarray]:
    """States of ``a`` that force the result of ``op`` to False/True."""
    f = np.array([False, False, True, True])
    g = np.array([False, True, False, True])
    res = op(f, g)
    forced_false = np.zeros(a.n_states, dtype=bool)
    forced_true = np.zeros(a.n_states, dtype=bool)
    for val, mask in ((False, a.dead_states()), (True, a.universal_states())):
        sel = f == val
        outs = res[sel]
        if outs[0] == outs[1]:
            if outs[0]:
                forced_true |= mask
            else:
                forced_false |= mask
    return forced_false, forced_true


def _swap(op: Callable) -> Callable:
    return lambda x, y: op(y, x)


def product(a: Dfa, b: Dfa, op: str | Callable = "and") -> Dfa:
    """Boolean combination of two automata over the union of their tracks."""
    fn = BOOL_OPS[op] if isinstance(op, str) else op
    tracks = tuple(sorted(set(a.tracks) | set(b.tracks)))
    da = a.delta[:, symbol_map(a.tracks, tracks)].astype(np.int64)
    db = b.delta[:, symbol_map(b.tracks, tracks)].astype(np.int64)
    na, nb = a.n_states, b.n_states
    total = na * nb
    sink_false, sink_true = total, total + 1
    af, at = _absorbing(a, fn)
    bf, bt = _absorbing(b, _swap(fn))

    def step(keys: np.ndarray) -> np.ndarray:
        pa, pb = np.divmod(keys, nb)
        nxt = da[pa] * nb + db[pb]
        qa, qb = np.divmod(nxt, nb)
        nxt = np.where(af[qa] | bf[qb], sink_false, nxt)
        nxt = np.where(at[qa] | bt[qb], sink_true, nxt)
        return nxt

    visited_chunks = [np.array([0], dtype=np.int64)]
    dense = total + 2 <= 60_000_000
    if dense:
        seen = np.zeros(total + 2, dtype=bool)
        seen[0] = True
    else:
        seen_set = {0}
    frontier = np.array([0], dtype=np.int64)
    count = 1
    while frontier.size:
        real = frontier[frontier < total]
        if real.size == 0:
            break
        nxt = np.unique(step(real).ravel())
        if dense:
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
        else:
            nxt = np.array([x for x in nxt.tolist() if x not in seen_set], dtype=np.int64)
            seen_set.update(nxt.tolist())
        count += nxt.size
        _check_ceiling(count)
        visited_chunks.append(nxt)
        frontier = nxt
    keys = np.sort(np.concatenate(visited_chunks))
    real = keys[keys < total]
    pa, pb = np.divmod(real, nb)
    rows = np.searchsorted(keys, step(real))
    acc = fn(a.accept[pa], b.accept[pb])
    for sink, val in ((sink_false, False), (sink_true, True)):
        if sink in keys[real.size:]:
            idx = int(np.searchsorted(keys, sink))
            rows = np.concatenate([rows, np.full((1, da.shape[1]), idx)])
            acc = np.concatenate([acc, [val]])
    return minimize_dfa(Dfa(tracks, rows.astype(np.int32), acc.astype(bool)))


def conjunction(automata: Iterable[Dfa]) -> Dfa:
    items = sorted(automata, key=lambda d: d.n_states)
    if not items:
        return constant_dfa((), True)
    out = items[0]
    for other in items[1:]:
        out = product(out, other, "and")
    return out


def complement(a: Dfa) -> Dfa:
    return Dfa(a.tracks, a.delta.copy(), ~a.accept)


class _OverBudget(Exception):
    pass


def project(a: Dfa, track: str, budget: int | None = None) -> Dfa:
    """Existentially quantify ``track`` away, with leading-zero closure.

    The erased digit is guessed nondeterministically.  The new initial set
    is closed under the all-zero column so that a witness needing more
    digits than the surviving tracks is still found.  ``budget`` caps the
    number of subset states (internal use by :func:`project_all`).
    """
    if track not in a.tracks:
        raise KeyError(f"unknown track {track!r}; tracks are {a.tracks}")
    k = a.width
    t = a.tracks.index(track)
    rest = a.tracks[:t] + a.tracks[t + 1:]
    low_bits = k - 1 - t
    reduced = np.arange(1 << (k - 1), dtype=np.int64)
    high = reduced >> low_bits
    low = reduced & ((1 << low_bits) - 1)
    idx0 = (high << (low_bits + 1)) | low
    idx1 = idx0 | (1 << low_bits)
    delta = a.delta.astype(np.int32)
    accept = a.accept

    # leading-zero closure of the initial set
    init = {0}
    while True:
        grown = init | set(delta[list(init), 0].tolist()) | set(delta[list(init), int(idx1[0])].tolist())
        if grown == init:
            break
        init = grown

    start = np.array(sorted(init), dtype=np.int32)
    index = {start.tobytes(): 0}
    members = [start]
    rows: list[np.ndarray] = []
    acc: list[bool] = []
    width = 1 << (k - 1)
    i = 0
    while i < len(members):
        cur = members[i]
        sub = delta[cur]
        cand = np.concatenate([sub[:, idx0], sub[:, idx1]], axis=0)
        cand.sort(axis=0)
        keep = np.ones(cand.shape, dtype=bool)
        keep[1:] = cand[1:] != cand[:-1]
        row = np.empty(width, dtype=np.int32)
        cols = cand.T
        kcols = keep.T
        for sym in range(width):
            nxt = cols[sym][kcols[sym]]
            key = nxt.tobytes()
            j = index.get(key)
            if j is None:
                j = len(members)
                index[key] = j
                members.append(nxt)
                if budget is not None and j >= budget:
                    raise _OverBudget
            row[sym] = j
        rows.append(row)
        acc.append(bool(accept[cur].any()))
        i += 1
        if i % 20000 == 0:
            _check_ceiling(len(members))
            log.debug("project %s: %d subsets", track, len(members))
    _check_ceiling(len(members))
    result = Dfa(rest, np.array(rows, dtype=np.int32).reshape(len(rows), width), np.array(acc, dtype=bool))
    return minimize_dfa(result)


def project_all(a: Dfa, tracks: Iterable[str]) -> Dfa:
    """Project several tracks, choosing the order greedily.

    Subset construction is sensitive to elimination order, so every
    remaining candidate is tried under a shared subset budget (doubled until
    some candidate fits) and the smallest result wins.
    """
    todo = sorted(t for t in set(tracks) if t in a.tracks)
    while todo:
        if len(todo) == 1:
            return project(a, todo[0])
        budget = 4 * a.n_states + 64
        while True:
            best = None
            for t in todo:
                try:
                    cand = project(a, t, budget)
                except _OverBudget:
                    continue
                if best is None or cand.n_states < best[1].n_states:
                    best = (t, cand)
            if best is not None:
                break
            budget *= 2
        todo.remove(best[0])
        a = best[1]
    return a


def restrict(a: Dfa, track: str, value: int) -> Dfa:
    """Substitute a constant for one track."""
    from .arith import linear_dfa

    pinned = linear_dfa({track: 1}, -value, "=")
    return project(product(a, pinned, "and"), track)


def equivalent(a: Dfa, b: Dfa) -> tuple[bool, tuple[int, ...] | None]:
    """Language equality; on failure also a shortest counterexample tuple."""
    if sorted(a.tracks) != sorted(b.tracks):
        raise ValueError(f"track mismatch: {a.tracks} vs {b.tracks}")
    diff = product(a, b, "xor")
    if diff.is_empty():
        return True, None
    word = shortest_accepted_word(diff)
    return False, decode(word, diff.width)


def shortest_accepted_word(a: Dfa) -> list[int] | None:
    parent = {0: None}
    queue = deque([0])
    while queue:
        q = queue.popleft()
        if a.accept[q]:
            word = []
            while parent[q] is not None:
                q, sym = parent[q]
                word.append(sym)
            return word[::-1]
        for sym in range(a.alphabet_size):
            r = int(a.delta[q, sym])
            if r not in parent:
                parent[r] = (q, sym)
                queue.append(r)
    return None


def _enumerate_single(a: Dfa, count: int) -> list[int]:
    """Smallest ``count`` accepted values of a one-track automaton."""
    out: list[int] = []
    if count <= 0:
        return out
    if a.accept[0]:
        out.append(0)
    n = a.n_states
    # reach[r]: states that accept after exactly r more digits
    reach = [a.accept.copy()]
    length = 1
    empty_run = 0
    while len(out) < count:
        while len(reach) < length:
            prev = reach[-1]
            reach.append(prev[a.delta[:, 0]] | prev[a.delta[:, 1]])
        found = 0
        q1 = int(a.delta[0, 1])
        if reach[length - 1][q1]:
            stack = [(q1, 1, length - 1)]
            while stack and len(out) < count:
                q, val, rem = stack.pop()
                if rem == 0:
                    out.append(val)
                    found += 1
                    continue
                for d in (1, 0):
                    r = int(a.delta[q, d])
                    if reach[rem - 1][r]:
                        stack.append((r, (val << 1) | d, rem - 1))
        empty_run = 0 if found else empty_run + 1
        if length > n and empty_run > n:
            break
        length += 1
    return out


def enumerate_accepted(a: Dfa, count: int) -> list:
    """The ``count`` lexicographically least accepted value tuples.

    One-track automata yield plain integers in increasing order; wider
    automata yield tuples ordered lexicographically in track order.
    """
    if a.width == 0:
        return [()] if count > 0 and a.accept[0] else []
    if a.width == 1:
        return _enumerate_single(a, count)
    head = a.tracks[0]
    first = project_all(a, a.tracks[1:])
    out: list[tuple[int, ...]] = []
    for v in _enumerate_single(first, count):
        for rest in enumerate_accepted(restrict(a, head, v), count - len(out)):
            rest = rest if isinstance(rest, tuple) else (rest,)
            out.append((v,) + rest)
        if len(out) >= count:
            break
    return out[:count]


def is_zero_robust(a: Dfa, samples: Iterable[Sequence[int]] = ()) -> bool:
    """Structural leading-zero check plus sampled acceptance comparisons."""
    if int(a.delta[0, 0]) != 0 and not _equivalent_states(a, 0, int(a.delta[0, 0])):
        return False
    for vals in samples:
        word = encode(vals)
        if bool(a.accept[a.run(word)]) != bool(a.accept[a.run([0] + word)]):
            return False
    return True


def _equivalent_states(a: Dfa, p: int, q: int) -> bool:
    classes = refine_partition(a.delta, a.accept.astype(np.int32))
    return classes[p] == classes[q]
