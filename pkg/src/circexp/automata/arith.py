"""Automata for linear relations over naturals, read msd-first."""
from __future__ import annotations

from typing import Mapping

from .dfa import Dfa, constant_dfa, cylindrify, explore

RELATIONS = ("=", "!=", "<", "<=", ">", ">=")

_TEST = {
    "=": lambda v: v == 0,
    "!=": lambda v: v != 0,
    "<": lambda v: v < 0,
    "<=": lambda v: v <= 0,
    ">": lambda v: v > 0,
    ">=": lambda v: v >= 0,
}


def linear_dfa(coeffs: Mapping[str, int], const: int, rel: str, tracks=()) -> Dfa:
    """Automaton for ``sum(c * x) + const  rel  0``.

    The state is the value of the weighted sum over the digits read so far;
    reading a column ``d`` maps ``v`` to ``2v + c.d``.  Once ``v`` is beyond the
    range from which the remaining digits can pull it back across zero, the
    sign of the final value is settled and the state collapses into a sink.
    """
    if rel not in _TEST:
        raise ValueError(f"unknown relation {rel!r}")
    test = _TEST[rel]
    names = sorted(v for v, c in coeffs.items() if c != 0)
    extra = sorted(set(tracks) - set(names))
    if not names:
        return constant_dfa(extra, test(const))
    cs = [coeffs[v] for v in names]
    pos = sum(c for c in cs if c > 0)
    neg = -sum(c for c in cs if c < 0)

    def settle(v):
        if v >= neg and v + const > 0:
            return "+"
        if v <= -pos and v + const < 0:
            return "-"
        return v

    def step(v, digits):
        if v == "+" or v == "-":
            return v
        return settle(2 * v + sum(c * d for c, d in zip(cs, digits)))

    def accepting(v):
        if v == "+":
            return test(1)
        if v == "-":
            return test(-1)
        return test(v + const)

    dfa = explore(names, settle(0), step, accepting)
    return cylindrify(dfa, extra) if extra else dfa
