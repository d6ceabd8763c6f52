from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from circexp.automata.dfa import enumerate_accepted
from circexp.automata.textio import loads
from circexp.logic.parser import parse_formula, parse_script
from circexp.oracle import circular_critical_exponent
from circexp.sequences import seq_window
from circexp.theorems import (PF_CATALOG, THEOREMS, TM_CATALOG, U, AceEncoding, Workbench, outputs_on_positive,
                              full_script, predicate_texts, tag)

from reference_values import ACE, DFAO_STATES, FACTOR, GREATEST, LEAST, PREFIX


# --------------------------------------------------------------------------
# formula texts and encodings


def test_tags():
    assert tag(Fraction(7, 3)) == "73"
    assert tag(Fraction(4)) == "41"


def test_predicate_texts_parse():
    texts = predicate_texts(Fraction(17, 7))
    assert "7*m>=17*p" in texts["facge177"]
    assert texts["faceq177"] == "$facge177(n,s) & ~$facgt177(n,s)"
    for text in texts.values():
        parse_formula(text)


def test_full_script_parses():
    cmds = parse_script(full_script(TM_CATALOG))
    names = [getattr(c, "name", None) for c in cmds]
    assert names[1] == "crep"
    assert names[-4:] == ["testpref", "testfac", "smallfactest", "largefactest"]
    assert parse_script(full_script(PF_CATALOG))[0].seq == "pf"


def test_catalogs_are_sorted_and_nested():
    for cat in (TM_CATALOG, PF_CATALOG):
        assert list(cat.factor) == sorted(cat.factor)
        assert set(cat.prefix) <= set(cat.factor)
        assert set(cat.least) | set(cat.greatest) <= set(cat.factor)


@given(st.sets(st.sampled_from(U)))
def test_ace_encoding_round_trip(exps):
    enc = AceEncoding.from_set(exps)
    assert enc.members == frozenset(exps)
    assert AceEncoding(enc.bitmask).members == frozenset(exps)


def test_ace_encoding_examples():
    assert AceEncoding.from_set([Fraction(1)]).bitmask == 2048
    assert AceEncoding.from_set([Fraction(4)]).bitmask == 1
    assert AceEncoding.from_set([]).bitmask == 0
    with pytest.raises(ValueError):
        AceEncoding.from_set([Fraction(9, 2)])


def test_workbench_rejects_bad_input(tmp_path):
    with pytest.raises(KeyError):
        Workbench("rudin", tmp_path)
    bench = Workbench("tm", tmp_path)
    with pytest.raises(ValueError):
        bench._register(Fraction(0))


# --------------------------------------------------------------------------
# predicate tables


def test_prefix_results(runner):
    rep = runner.run("testpref")
    assert rep.result is True and rep.states == 1423
    for r, ((ge, gt, eq), first) in PREFIX.items():
        t = tag(r)
        assert (rep.state_counts["prefge" + t], rep.state_counts["prefgt" + t],
                rep.state_counts["prefeq" + t]) == (ge, gt, eq), r
        assert rep.first["prefeq" + t][:len(first)] == first, r


def test_factor_results(runner):
    rep = runner.run("testfac")
    assert rep.result is True
    for r, ((ge, gt, eq), first) in FACTOR.items():
        t = tag(r)
        assert (rep.state_counts["facge" + t], rep.state_counts["facgt" + t],
                rep.state_counts["faceq" + t]) == (ge, gt, eq), r
        assert rep.first["faceq" + t] == [first], r


def test_first_factor_occurrences_are_real(bench):
    for r, (_, (n, s)) in FACTOR.items():
        assert circular_critical_exponent(seq_window("tm", s, n)) == r


def test_least_results(runner, bench):
    rep = runner.run("smallfactest")
    assert rep.result is True
    for r, ((fac, small), first) in LEAST.items():
        t = tag(r)
        assert (rep.state_counts["fac" + t], rep.state_counts["facsmall" + t]) == (fac, small), r
        assert enumerate_accepted(bench.predicate("facsmall" + t), len(first)) == first, r


def test_greatest_results(runner, bench):
    rep = runner.run("largefactest")
    assert rep.result is True
    for r, (states, first) in GREATEST.items():
        t = tag(r)
        assert rep.state_counts["faclarge" + t] == states, r
        assert enumerate_accepted(bench.predicate("faclarge" + t), len(first)) == first, r


def test_prop1(runner):
    rep = runner.run("prop1")
    assert rep.result is True
    assert rep.extra["brute_force"] == "ok"
    assert rep.extra["overlap_free"] == rep.extra["squares"] == "true"


def _box_agrees(bench, family, r, arity):
    dfa = bench.predicate(family + bench._register(r))
    cmp = {"ge": lambda x: x >= r, "gt": lambda x: x > r, "eq": lambda x: x == r}[family[-2:]]
    for n in range(1, 16):
        for s in range(16 if arity == 2 else 1):
            want = cmp(circular_critical_exponent(seq_window("tm", s, n)))
            args = (n, s) if arity == 2 else (n,)
            assert dfa.accepts(*args) == want, (family, r, n, s)


@pytest.mark.parametrize("r", [Fraction(2), Fraction(7, 3), Fraction(5, 2), Fraction(3)])
def test_predicates_agree_with_oracle_on_small_box(bench, r):
    for family in ("prefge", "prefgt", "prefeq"):
        _box_agrees(bench, family, r, 1)
    for family in ("facge", "facgt", "faceq"):
        _box_agrees(bench, family, r, 2)


# --------------------------------------------------------------------------
# DFAOs


@pytest.mark.parametrize("name", sorted(DFAO_STATES))
def test_dfao_reports(runner, name):
    rep = runner.run(name)
    assert rep.result == "built"
    assert rep.states == DFAO_STATES[name]
    assert rep.extra["oracle_mismatches"] == 0
    assert rep.artifacts and rep.artifacts[0].exists()
    assert loads(rep.artifacts[0].read_text()).n_states == DFAO_STATES[name]


def test_dfao_spot_values(bench):
    assert bench.prefix_dfao()(9) == Fraction(8, 3)
    assert bench.prefix_dfao()(0) is None
    assert bench.factor_dfao()(7, 10) == Fraction(7, 2)
    assert bench.factor_dfao()(23, 19) == Fraction(17, 7)
    assert bench.lcce_dfao()(5) == Fraction(5, 2)
    assert bench.gcce_dfao()(6) == 4


def test_dfao_outputs_stay_in_catalog(bench):
    assert outputs_on_positive(bench.prefix_dfao()) == set(TM_CATALOG.prefix)
    assert outputs_on_positive(bench.factor_dfao()) == set(TM_CATALOG.factor)
    assert outputs_on_positive(bench.lcce_dfao()) == set(TM_CATALOG.least)
    assert outputs_on_positive(bench.gcce_dfao()) == set(TM_CATALOG.greatest)
    assert len(outputs_on_positive(bench.ace_dfao())) == 31


def test_every_exponent_set_row(bench):
    ace = bench.ace_dfao()
    assert len(ACE) == 31
    values = ace.eval_many(range(1, 241))
    for exps, code, ns in ACE:
        assert bench.encoding(exps).bitmask == code
        assert AceEncoding(code).members == exps
        for n in ns:
            assert ace(n) == code, (n, code)
        assert values.index(code) + 1 == ns[0], code


def test_ace_spot_rows(bench):
    ace = bench.ace_dfao()
    assert [ace(n) for n in (7, 13, 23, 74)] == [532, 624, 404, 761]


# --------------------------------------------------------------------------
# runner


def test_report_text(runner):
    rep = runner.run("dfao_gcce")
    text = rep.to_text(timing=False)
    assert text.startswith("theorem dfao_gcce result=built states=9 elapsed_ms=0 ")
    assert "oracle_mismatches=0" in text


def test_unknown_theorem(runner):
    with pytest.raises(KeyError):
        runner.run("theorem_99")
    assert THEOREMS[0] == "prop1"


def test_predicate_artifacts_written(bench):
    bench.predicate("prefeq73")
    path = bench.artifact_path("prefeq73")
    assert path.exists() and loads(path.read_text()).tracks == ("n",)


# --------------------------------------------------------------------------
# paperfolding (opt-in, minutes and about a gigabyte)


@pytest.mark.pf
@pytest.mark.slow
@pytest.mark.parametrize("name", ["pf_a", "pf_b", "pf_c", "pf_d", "pf_e"])
def test_paperfolding_items(runner, name):
    rep = runner.run(name)
    assert rep.ok, rep.to_text(timing=False)
    if name == "pf_e":
        assert rep.extra["distinct_outputs"] == PF_CATALOG.ace_sets
