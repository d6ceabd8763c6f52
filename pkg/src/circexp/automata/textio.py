"""Line-oriented text format and DOT export for Dfa and Dfao.

::

    tracks: i m n p s          (``-`` when there are no named tracks)
    kind: dfa                  (or dfao)
    state 0 accept             (dfa: accept|reject; dfao: out=<symbol>)
    ...
    0 00000 1                  (from, digits per track, to)

A zero-track DFA has the single empty symbol, written ``-``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable

import numpy as np

from .dfa import Dfa, symbol_digits
from .dfao import Dfao


def format_symbol(value: Hashable) -> str:
    if value is None:
        return "?"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, tuple):
        return "[" + ",".join(format_symbol(v) for v in value) + "]"
    text = str(value)
    if any(c.isspace() for c in text):
        raise ValueError(f"output symbol {text!r} contains whitespace")
    return text


def parse_symbol(text: str) -> Hashable:
    if text == "?":
        return None
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1]
        if not inner:
            return ()
        parts, depth, cur = [], 0, ""
        for c in inner:
            if c == "," and depth == 0:
                parts.append(cur)
                cur = ""
                continue
            depth += c == "["
            depth -= c == "]"
            cur += c
        parts.append(cur)
        return tuple(parse_symbol(p) for p in parts)
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    try:
        return int(text)
    except ValueError:
        return text


def _digits(sym: int, width: int) -> str:
    if width == 0:
        return "-"
    return "".join(str(d) for d in symbol_digits(sym, width))


def dumps(m: Dfa | Dfao) -> str:
    lines = ["tracks: " + (" ".join(m.tracks) if m.tracks else "-")]
    if isinstance(m, Dfa):
        width = m.width
        lines.append("kind: dfa")
        for q in range(m.n_states):
            lines.append(f"state {q} {'accept' if m.accept[q] else 'reject'}")
    else:
        width = m.arity
        lines.append("kind: dfao")
        for q in range(m.n_states):
            lines.append(f"state {q} out={format_symbol(m.out[q])}")
    k = m.delta.shape[1]
    for q in range(m.n_states):
        row = m.delta[q]
        for sym in range(k):
            lines.append(f"{q} {_digits(sym, width)} {int(row[sym])}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Dfa | Dfao:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or not lines[0].startswith("tracks: ") or not lines[1].startswith("kind: "):
        raise ValueError("missing tracks/kind header")
    names = lines[0][len("tracks: "):].split()
    tracks = () if names == ["-"] else tuple(names)
    kind = lines[1][len("kind: "):].strip()
    if kind not in ("dfa", "dfao"):
        raise ValueError(f"unknown kind {kind!r}")
    width = len(tracks) if kind == "dfa" else max(1, len(tracks))
    states: list[str] = []
    i = 2
    while i < len(lines) and lines[i].startswith("state "):
        _, qid, info = lines[i].split(" ", 2)
        if int(qid) != len(states):
            raise ValueError(f"state ids out of order at line {i + 1}")
        states.append(info)
        i += 1
    n = len(states)
    k = 1 << width
    delta = np.full((n, k), -1, dtype=np.int32)
    for line in lines[i:]:
        src, digits, dst = line.split(" ")
        sym = 0 if digits == "-" else int(digits, 2)
        if digits != "-" and len(digits) != width:
            raise ValueError(f"bad symbol {digits!r}")
        delta[int(src), sym] = int(dst)
    if (delta < 0).any():
        raise ValueError("transition table is not total")
    if kind == "dfa":
        accept = np.array([s == "accept" for s in states], dtype=bool)
        return Dfa(tracks, delta, accept)
    out = tuple(parse_symbol(s[len("out="):]) for s in states)
    return Dfao(tracks, delta, out)


def to_dot(m: Dfa | Dfao, name: str = "automaton") -> str:
    width = m.width if isinstance(m, Dfa) else m.arity
    lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  start [shape=point];', "  start -> 0;"]
    for q in range(m.n_states):
        if isinstance(m, Dfa):
            shape = "doublecircle" if m.accept[q] else "circle"
            lines.append(f'  {q} [shape={shape}, label="{q}"];')
        else:
            lines.append(f'  {q} [shape=circle, label="{q}/{format_symbol(m.out[q])}"];')
    for q in range(m.n_states):
        edges: dict[int, list[str]] = {}
        for sym in range(m.delta.shape[1]):
            edges.setdefault(int(m.delta[q, sym]), []).append(_digits(sym, width))
        for dst, labels in edges.items():
            lines.append(f'  {q} -> {dst} [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
