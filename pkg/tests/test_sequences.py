from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circexp.automata.dfao import Dfao, minimize_dfao
from circexp.sequences import (MU, PF_DFAO, TM_DFAO, Morphism, fixed_point_prefix, from_digits, pf_at,
                               pf_rule, register, seq_window, sequence_dfao, tm_at, tm_parity, to_digits)


def test_tm_first_letters():
    assert "".join(str(tm_at(i)) for i in range(8)) == "01101001"
    assert tm_at(0) == 0
    assert tm_at(2 ** 20) == 1


def test_pf_first_letters():
    assert "".join(str(pf_at(i)) for i in range(20)) == "00100110001101100010"
    assert pf_at(0) == 0


def _pf_unfold(length):
    # fold a strip repeatedly: p_{k+1} = p_k 0 reverse(complement(p_k))
    word = "0"
    while len(word) < length:
        word = word + "0" + "".join("1" if c == "0" else "0" for c in reversed(word))
    return word


def test_pf_at_100_matches_unfolding():
    assert pf_at(100) == pf_rule(100) == int(_pf_unfold(101)[100])


def test_three_definitions_of_tm_agree():
    n = 1 << 16
    via_dfao = TM_DFAO.eval_many(np.arange(n))
    word = fixed_point_prefix(MU, "0", n)
    assert via_dfao == [tm_parity(i) for i in range(n)]
    assert word == "".join(map(str, via_dfao))


def test_two_definitions_of_pf_agree():
    n = 1 << 16
    assert PF_DFAO.eval_many(np.arange(n)) == [pf_rule(i) for i in range(n)]
    assert "".join(map(str, PF_DFAO.eval_many(np.arange(4096)))) == _pf_unfold(4096)[:4096]


def test_fixed_point_prefix():
    assert fixed_point_prefix(MU, "0", 8) == "01101001"
    assert fixed_point_prefix(MU, "0", 0) == ""
    with pytest.raises(ValueError):
        fixed_point_prefix(Morphism({"0": "10", "1": "01"}), "0", 4)


def test_morphism_validation():
    with pytest.raises(ValueError):
        Morphism({"0": "", "1": "1"})
    with pytest.raises(ValueError):
        Morphism({"0": "02", "1": "1"})


def test_windows():
    assert seq_window("tm", 0, 8) == "01101001"
    assert seq_window("tm", 3, 0) == ""
    assert seq_window("tm", 10, 7) == "".join(str(tm_at(i)) for i in range(10, 17))
    with pytest.raises(KeyError):
        seq_window("rs", 0, 3)


@given(st.integers(min_value=0, max_value=10 ** 12))
def test_numeral_round_trip(v):
    assert from_digits(to_digits(v)) == v
    assert from_digits("000" + to_digits(v)) == v


def test_zero_is_empty_numeral():
    assert to_digits(0) == ""
    assert from_digits("") == 0


@pytest.mark.parametrize("m", [TM_DFAO, PF_DFAO])
def test_shipped_dfaos_are_zero_robust_and_minimal(m):
    assert m.is_zero_robust()
    assert minimize_dfao(m).same_as(m)


def test_register_rejects_dfao_without_initial_zero_loop():
    bad = Dfao((), np.array([[1, 1], [1, 1]], dtype=np.int32), (0, 1))
    with pytest.raises(ValueError):
        register("bad", bad)
    with pytest.raises(KeyError):
        sequence_dfao("bad")
