"""Brute-force repetition measures on finite words.

Exponents are exact ``Fraction`` values.  Words may be ``str``, ``bytes`` or
any sequence of comparable letters.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .sequences import sequence_dfao

Rational = Fraction


def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def _letters(w) -> list:
    if len(w) == 0:
        raise ValueError("the empty word has no exponent")
    return list(w)


def periods(w) -> set[int]:
    w = _letters(w)
    n = len(w)
    return {p for p in range(1, n + 1) if all(w[i] == w[i + p] for i in range(n - p))}


def least_period(w) -> int:
    w = _letters(w)
    n = len(w)
    for p in range(1, n + 1):
        if all(w[i] == w[i + p] for i in range(n - p)):
            return p
    return n  # unreachable: n is always a period


def exponent(w) -> Fraction:
    return Fraction(len(w), least_period(w))


def _codes(w) -> np.ndarray:
    letters = _letters(w)
    table: dict = {}
    return np.array([table.setdefault(c, len(table)) for c in letters], dtype=np.int32)


def _longest_runs(match: np.ndarray) -> np.ndarray:
    """Longest run of True in each row."""
    rows, length = match.shape
    if length == 0:
        return np.zeros(rows, dtype=np.int64)
    idx = np.arange(1, length + 1)
    last_false = np.where(match, 0, idx)
    np.maximum.accumulate(last_false, axis=1, out=last_false)
    return (idx - last_false).max(axis=1)


def critical_exponent(w) -> Fraction:
    """Largest exponent of a nonempty factor.

    A factor of length m with period p is a run of m - p positions where
    ``w[i] == w[i+p]``, so the maximum over factors is the maximum over p of
    ``(longest match run + p) / p``.
    """
    c = _codes(w)
    n = c.size
    best = Fraction(1)
    if n == 1:
        return best
    p = np.arange(1, n)
    i = np.arange(n)
    j = i[None, :] + p[:, None]
    inside = j < n
    match = inside & (c[i][None, :] == c[np.minimum(j, n - 1)])
    runs = _longest_runs(match)
    for period, run in zip(p.tolist(), runs.tolist()):
        cand = Fraction(run + period, period)
        if cand > best:
            best = cand
    return best


def circular_critical_exponent(w) -> Fraction:
    """Largest exponent of a factor of a conjugate of ``w``.

    Factors of conjugates are the factors of ``ww`` of length at most |w|.
    For period p the matches ``w[i] == w[(i+p) mod n]`` are read cyclically
    and the run length is capped at n - p.
    """
    return circular_critical_exponents(_codes(w)[None, :])[0]


def circular_critical_exponents(words: np.ndarray) -> list[Fraction]:
    """Batch version for a (count, n) array of equal-length words."""
    words = np.asarray(words)
    count, n = words.shape
    if n == 0:
        raise ValueError("the empty word has no exponent")
    p = np.arange(1, n + 1)
    i = np.arange(n)
    shifted = words[:, (i[None, :] + p[:, None]) % n]
    match = words[:, None, :] == shifted
    doubled = np.concatenate([match, match], axis=2).reshape(count * n, 2 * n)
    runs = np.minimum(_longest_runs(doubled).reshape(count, n), n - p)
    # denominators are at most n, so float ties cannot hide a larger fraction
    ratio = (runs + p) / p
    best = ratio.argmax(axis=1)
    return [Fraction(int(runs[k, b]) + int(p[b]), int(p[b])) for k, b in enumerate(best.tolist())]


def conjugates(w) -> set:
    if len(w) == 0:
        raise ValueError("the empty word has no conjugates here")
    return {w[k:] + w[:k] for k in range(len(w))}


def crep_oracle(i: int, m: int, n: int, p: int, s: int, seq: str | Sequence = "tm") -> bool:
    """Does the circular word seq[s..s+n-1] have a length-m factor at i with period p?

    Positions are absolute (s <= i < s+n) and wrap around modulo n.
    """
    if not (p >= 1 and 0 <= m <= n and s <= i < s + n):
        raise ValueError(f"precondition violated for (i={i}, m={m}, n={n}, p={p}, s={s})")
    if isinstance(seq, str):
        from .sequences import seq_window

        x = seq_window(seq, s, n)
    else:
        x = seq[s:s + n]
    off = i - s
    return all(x[(off + j) % n] == x[(off + j + p) % n] for j in range(max(0, m - p)))


def crep_oracle_many(tuples: np.ndarray, seq: str = "tm") -> np.ndarray:
    """Vectorised :func:`crep_oracle` for an (N, 5) array of (i, m, n, p, s) rows."""
    t = np.asarray(tuples, dtype=np.int64).reshape(-1, 5)
    i, m, n, p, s = t.T
    ok = (p >= 1) & (m >= 0) & (m <= n) & (s <= i) & (i < s + n)
    if not ok.all():
        bad = t[np.flatnonzero(~ok)[0]]
        raise ValueError(f"precondition violated for (i, m, n, p, s) = {tuple(bad.tolist())}")
    if t.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    letters = np.array(sequence_dfao(seq).eval_many(np.arange(int((s + n).max()))))
    off = i - s
    span = m - p
    result = np.ones(t.shape[0], dtype=bool)
    for j in range(max(0, int(span.max()))):
        live = j < span
        a = s + (off + j) % n
        b = s + (off + j + p) % n
        result &= ~live | (letters[a] == letters[b])
    return result


def length_stats_oracle(n: int, seq: str = "tm", scan_bound: int | None = None):
    """(least, greatest, set) of ccexp over length-n windows starting at s <= scan_bound."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if scan_bound is None:
        scan_bound = 16 * n
    if scan_bound < n:
        raise ValueError("scan bound must be at least n")
    m = sequence_dfao(seq)
    letters = np.array(m.eval_many(np.arange(scan_bound + n)), dtype=np.int8)
    windows = np.lib.stride_tricks.sliding_window_view(letters, n)[: scan_bound + 1]
    distinct = np.unique(windows, axis=0)
    values = set()
    for lo in range(0, distinct.shape[0], 256):
        values.update(circular_critical_exponents(distinct[lo:lo + 256]))
    return min(values), max(values), frozenset(values)


def distinct_factors(word, length: int) -> set:
    return {word[s:s + length] for s in range(len(word) - length + 1)}
