"""Thue-Morse and regular paperfolding words, arithmetically and as 2-DFAOs."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .automata.dfao import Dfao


def to_digits(value: int) -> str:
    """Base-2 numeral, most significant digit first; 0 is the empty string."""
    if value < 0:
        raise ValueError("naturals only")
    return format(value, "b") if value else ""


def from_digits(digits: str) -> int:
    if digits and set(digits) - {"0", "1"}:
        raise ValueError(f"not a binary numeral: {digits!r}")
    return int(digits, 2) if digits else 0


@dataclass(frozen=True)
class Morphism:
    images: Mapping[str, str]
    alphabet: frozenset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.images))
        for a, img in self.images.items():
            if not img:
                raise ValueError(f"image of {a!r} is empty")
            if set(img) - self.alphabet:
                raise ValueError(f"image of {a!r} leaves the alphabet")

    def apply(self, word: str) -> str:
        return "".join(self.images[c] for c in word)


MU = Morphism({"0": "01", "1": "10"})


def fixed_point_prefix(m: Morphism, seed: str, length: int) -> str:
    img = m.images.get(seed, "")
    if not img.startswith(seed) or len(img) < 2:
        raise ValueError(f"morphism is not prolongable on {seed!r}")
    word = seed
    while len(word) < length:
        word = m.apply(word)
    return word[:length]


def tm_parity(i: int) -> int:
    return bin(i).count("1") & 1


def pf_rule(i: int) -> int:
    """Write i+1 = odd * 2^a; the letter is 1 iff odd = 3 (mod 4)."""
    j = i + 1
    while j % 2 == 0:
        j //= 2
    return 1 if j % 4 == 3 else 0


# state = parity of ones read so far
TM_DFAO = Dfao((), np.array([[0, 1], [1, 0]], dtype=np.int32), (0, 1))

# state (last digit, digit preceding the lowest 0 seen); output is the latter
PF_DFAO = Dfao(
    (),
    np.array([[0, 1], [2, 1], [0, 3], [2, 3]], dtype=np.int32),
    (0, 0, 1, 1),
)

SEQUENCES: dict[str, Dfao] = {"tm": TM_DFAO, "pf": PF_DFAO}


def register(name: str, dfao: Dfao) -> None:
    """Make a sequence DFAO available to windows and indexing atoms."""
    if dfao.arity != 1 or not dfao.is_zero_robust():
        raise ValueError("sequence DFAOs read one input and need a 0-loop on the initial state")
    SEQUENCES[name] = dfao


def sequence_dfao(name: str) -> Dfao:
    try:
        return SEQUENCES[name]
    except KeyError:
        raise KeyError(f"unknown sequence {name!r}; known: {sorted(SEQUENCES)}") from None


def tm_at(i: int) -> int:
    return TM_DFAO(i)


def pf_at(i: int) -> int:
    return PF_DFAO(i)


def seq_at(seq: str, i: int) -> int:
    return sequence_dfao(seq)(i)


def seq_window(seq: str, s: int, n: int) -> str:
    m = sequence_dfao(seq)
    if n <= 0:
        return ""
    vals = m.eval_many(np.arange(s, s + n))
    return "".join(str(v) for v in vals)
