"""Named predicates, theorem runners and exponent-valued DFAOs.

Every predicate is written in the script dialect and compiled through a
:class:`~circexp.logic.compiler.PredicateStore`, so the same text can be fed
to ``circexp prove``.  :func:`full_script` renders the whole development
for one sequence.
"""
from __future__ import annotations

import functools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .automata.arith import linear_dfa
from .automata.dfa import Dfa, enumerate_accepted, largest_intermediate
from .automata.dfao import Dfao, PartitionError, acceptors_to_dfao, dfao_cross, minimize_dfao
from .automata.textio import dumps
from .logic.ast import calls
from .logic.compiler import PredicateStore, compile_formula, counterexample
from .logic.parser import parse_formula
from .oracle import circular_critical_exponent, critical_exponent, distinct_factors, format_rational, \
    length_stats_oracle
from .sequences import seq_window

log = logging.getLogger(__name__)


def _fracs(*items) -> tuple[Fraction, ...]:
    return tuple(sorted(Fraction(x) for x in items))


@dataclass(frozen=True)
class ExponentCatalog:
    """Claimed exponent sets for one sequence, each in increasing order."""

    seq: str
    prefix: tuple[Fraction, ...]
    factor: tuple[Fraction, ...]
    least: tuple[Fraction, ...]
    greatest: tuple[Fraction, ...]
    ace_sets: int

    def __post_init__(self):
        for name in ("prefix", "least", "greatest"):
            if not set(getattr(self, name)) <= set(self.factor):
                raise ValueError(f"{name} exponents must be factor exponents")


TM_CATALOG = ExponentCatalog(
    "tm",
    prefix=_fracs(1, 2, "7/3", "5/2", "13/5", "8/3", 3),
    factor=_fracs(1, 2, "7/3", "17/7", "5/2", "13/5", "8/3", 3, "10/3", "7/2", "11/3", 4),
    least=_fracs(1, 2, "7/3", "17/7", "5/2"),
    greatest=_fracs(1, 2, 3, "7/2", 4),
    ace_sets=31,
)

PF_CATALOG = ExponentCatalog(
    "pf",
    prefix=_fracs(1, 2, "7/3", 3, "10/3", 4, "13/3", 5),
    factor=_fracs(1, 2, "7/3", "5/2", "8/3", "11/4", 3, "10/3", "7/2", 4, "13/3", 5, 6),
    least=_fracs(1, 2, "7/3", "5/2", "8/3", "11/4", 3),
    greatest=_fracs(1, 2, 3, 4, 5, 6),
    ace_sets=16,
)

CATALOGS = {"tm": TM_CATALOG, "pf": PF_CATALOG}

S, U, T, V = TM_CATALOG.prefix, TM_CATALOG.factor, TM_CATALOG.least, TM_CATALOG.greatest

# the three wraparound ranges of a length-m factor at offset i of the circular
# word seq[s..s+n-1], written with subtraction only where it cannot underflow
CREP = (
    "(Aj ((j>=i)&(j+p<s+n)&(j+p<i+m)) => T[j]=T[j+p]) &\n"
    "     (Aj ((j>=i)&(j<s+n)&(j+p>=s+n)&(j+p<i+m)) => T[j]=T[(j+p)-n]) &\n"
    "     (Aj ((j>=i)&(j>=s+n)&(j+p<i+m)) => T[j-n]=T[(j+p)-n])"
)

OVERLAP_FREE = "~(E i,p (p>=1) & (A j (j<=p) => T[i+j]=T[i+j+p]))"
SQUARE_IN_EVERY_4 = ("A s,n (n>=4) => (E i,p (p>=1) & (i>=s) & (i+2*p<=s+n) & "
                     "(A j (j<p) => T[i+j]=T[i+j+p]))")


def tag(r: Fraction) -> str:
    """Predicate suffix for an exponent: 7/3 -> "73"."""
    r = Fraction(r)
    return f"{r.numerator}{r.denominator}"


def predicate_texts(r: Fraction, t: str | None = None) -> dict[str, str]:
    """All per-exponent predicates for a/b = r, keyed by name."""
    r = Fraction(r)
    a, b = r.numerator, r.denominator
    t = tag(r) if t is None else t
    pref = "E i,m,p (p>=1) & (m<=n) & (i<n) & ({b}*m{op}{a}*p) & $crep(i,m,n,p,0)"
    fac = "E i,m,p (p>=1) & (m<=n) & (i>=s) & (i<s+n) & ({b}*m{op}{a}*p) & $crep(i,m,n,p,s)"
    return {
        f"prefge{t}": pref.format(a=a, b=b, op=">="),
        f"prefgt{t}": pref.format(a=a, b=b, op=">"),
        f"prefeq{t}": f"$prefge{t}(n) & ~$prefgt{t}(n)",
        f"facge{t}": fac.format(a=a, b=b, op=">="),
        f"facgt{t}": fac.format(a=a, b=b, op=">"),
        f"faceq{t}": f"$facge{t}(n,s) & ~$facgt{t}(n,s)",
        f"fac{t}": f"E s $faceq{t}(n,s)",
        f"facsmall{t}": f"$fac{t}(n) & (A s $facge{t}(n,s))",
        f"faclarge{t}": f"(E s $faceq{t}(n,s)) & (A s ~$facgt{t}(n,s))",
    }


def eval_texts(catalog: ExponentCatalog) -> dict[str, str]:
    def any_of(fmt, exps):
        return " | ".join(fmt.format(tag(r)) for r in exps)

    return {
        "testpref": f"An (n>=1) => ({any_of('$prefeq{}(n)', catalog.prefix)})",
        "testfac": f"An (n>=1) => (As ({any_of('$faceq{}(n,s)', catalog.factor)}))",
        "smallfactest": f"An (n>=1) => ({any_of('$facsmall{}(n)', catalog.least)})",
        "largefactest": f"An (n>=1) => ({any_of('$faclarge{}(n)', catalog.greatest)})",
    }


def full_script(catalog: ExponentCatalog = TM_CATALOG) -> str:
    """The whole development as a script for ``circexp prove``."""
    lines = [f"#sequence {catalog.seq}", f'def crep "{CREP}":']
    wanted = {
        "prefge": catalog.prefix, "prefgt": catalog.prefix, "prefeq": catalog.prefix,
        "facge": catalog.factor, "facgt": catalog.factor, "faceq": catalog.factor,
        "fac": catalog.factor, "facsmall": catalog.least, "faclarge": catalog.greatest,
    }
    for family, exps in wanted.items():
        for r in exps:
            name = family + tag(r)
            lines.append(f'def {name} "{predicate_texts(r)[name]}":')
    for name, text in eval_texts(catalog).items():
        lines.append(f'eval {name} "{text}":')
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AceEncoding:
    """A set of factor exponents as a bitmask; the smallest exponent is the top bit."""

    bitmask: int
    catalog: tuple[Fraction, ...] = U

    @classmethod
    def from_set(cls, exps: Iterable[Fraction], catalog: tuple[Fraction, ...] = U) -> AceEncoding:
        width = len(catalog)
        mask = 0
        for r in exps:
            mask |= 1 << (width - 1 - catalog.index(Fraction(r)))
        return cls(mask, catalog)

    @property
    def members(self) -> frozenset[Fraction]:
        width = len(self.catalog)
        return frozenset(r for k, r in enumerate(self.catalog) if self.bitmask >> (width - 1 - k) & 1)


# --------------------------------------------------------------------------
# building


class Workbench:
    """Lazily compiled predicates and DFAOs for one sequence."""

    def __init__(self, seq: str = "tm", cache_dir: str | Path | None = None,
                 catalog: ExponentCatalog | None = None):
        self.seq = seq
        self.catalog = catalog if catalog is not None else CATALOGS[seq]
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self.store = PredicateStore(bindings={"T": seq}, cache_dir=self.cache_dir)
        self.texts: dict[str, str] = {"crep": CREP}
        self.tags: dict[str, Fraction] = {}
        self.dfaos: dict[str, Dfao] = {}
        for r in self.catalog.factor:
            self._register(r)

    # predicates ------------------------------------------------------------
    def _register(self, r: Fraction) -> str:
        r = Fraction(r)
        if r <= 0:
            raise ValueError("exponents are positive")
        t = tag(r)
        if self.tags.get(t, r) != r:
            t = f"{r.numerator}_{r.denominator}"
        if t not in self.tags:
            self.tags[t] = r
            self.texts.update(predicate_texts(r, t))
        return t

    def predicate(self, name: str) -> Dfa:
        if name not in self.store:
            if name not in self.texts:
                raise KeyError(f"unknown predicate {name!r}")
            f = parse_formula(self.texts[name])
            for dep in sorted(calls(f)):
                self.predicate(dep)
            dfa = self.store.define(name, f).dfa
            self.save_artifact(name, dfa)
        return self.store[name].dfa

    def save_artifact(self, name: str, automaton: Dfa | Dfao) -> Path | None:
        if self.cache_dir is None:
            return None
        path = self.artifact_path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = dumps(automaton)
        if not path.exists() or path.read_text(encoding="utf-8") != text:
            path.write_text(text, encoding="utf-8")
        return path

    def artifact_path(self, name: str) -> Path:
        if self.cache_dir is None:
            raise ValueError("no cache directory configured")
        return self.cache_dir / "artifacts" / self.seq / f"{name}.txt"

    def build_crep(self) -> Dfa:
        return self.predicate("crep")

    def build_pref(self, r) -> tuple[Dfa, Dfa, Dfa]:
        t = self._register(r)
        return tuple(self.predicate(f"pref{k}{t}") for k in ("ge", "gt", "eq"))

    def build_fac(self, r) -> tuple[Dfa, Dfa, Dfa]:
        t = self._register(r)
        return tuple(self.predicate(f"fac{k}{t}") for k in ("ge", "gt", "eq"))

    def build_fac_small(self, r) -> tuple[Dfa, Dfa]:
        t = self._register(r)
        return self.predicate(f"fac{t}"), self.predicate(f"facsmall{t}")

    def build_fac_large(self, r) -> Dfa:
        return self.predicate(f"faclarge{self._register(r)}")

    def evaluate(self, name: str) -> tuple[bool, dict[str, int] | None]:
        f = parse_formula(eval_texts(self.catalog)[name] if name in eval_texts(self.catalog)
                          else {"overlapfree": OVERLAP_FREE, "squares": SQUARE_IN_EVERY_4}[name])
        for dep in sorted(calls(f)):
            self.predicate(dep)
        value = bool(compile_formula(f, self.store).accept[0])
        return value, None if value else counterexample(f, self.store)

    # DFAOs -----------------------------------------------------------------
    def _dfao(self, name: str, family: str, exps) -> Dfao:
        if name not in self.dfaos:
            domain = linear_dfa({"n": 1}, -1, ">=")
            pairs = [(self.predicate(family + self._register(r)), r) for r in exps]
            m = acceptors_to_dfao(pairs, domain=domain)
            self.dfaos[name] = m
            self.save_artifact(name, m)
        return self.dfaos[name]

    def prefix_dfao(self) -> Dfao:
        return self._dfao("dfao_prefix", "prefeq", self.catalog.prefix)

    def factor_dfao(self) -> Dfao:
        return self._dfao("dfao_factor", "faceq", self.catalog.factor)

    def lcce_dfao(self) -> Dfao:
        return self._dfao("dfao_lcce", "facsmall", self.catalog.least)

    def gcce_dfao(self) -> Dfao:
        return self._dfao("dfao_gcce", "faclarge", self.catalog.greatest)

    def ace_cross(self) -> Dfao:
        """Reachable cross product of the ``fac`` acceptors; outputs are flag tuples."""
        exps = self.catalog.factor
        cross = self.predicate("fac" + self._register(exps[0])).as_dfao().map_outputs(lambda b: (b,))
        for r in exps[1:]:
            nxt = self.predicate("fac" + self._register(r)).as_dfao()
            cross = dfao_cross(cross, nxt, combine=lambda x, y: x + (y,), check=False)
        return cross

    def ace_dfao(self) -> Dfao:
        if "dfao_ace" not in self.dfaos:
            width = len(self.catalog.factor)

            def mask(flags):
                return sum(1 << (width - 1 - k) for k, f in enumerate(flags) if f)

            m = minimize_dfao(self.ace_cross().map_outputs(mask))
            self.dfaos["dfao_ace"] = m
            self.save_artifact("dfao_ace", m)
        return self.dfaos["dfao_ace"]

    def build_ccexp_dfaos(self) -> dict[str, Dfao]:
        return {
            "dfao_prefix": self.prefix_dfao(),
            "dfao_factor": self.factor_dfao(),
            "dfao_lcce": self.lcce_dfao(),
            "dfao_gcce": self.gcce_dfao(),
            "dfao_ace": self.ace_dfao(),
        }

    def encoding(self, exps: Iterable[Fraction]) -> AceEncoding:
        return AceEncoding.from_set(exps, self.catalog.factor)


def outputs_on_positive(m: Dfao) -> set:
    """Outputs of states reachable by some input with a nonzero first component."""
    width = m.arity
    starts = {int(m.delta[0, sym]) for sym in range(1 << width) if sym >> (width - 1) & 1}
    seen = set(starts)
    stack = list(starts)
    while stack:
        q = stack.pop()
        for r in m.delta[q].tolist():
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return {m.out[q] for q in seen}


# --------------------------------------------------------------------------
# oracle comparisons


def prefix_mismatches(bench: Workbench, ns: Iterable[int]) -> list[tuple]:
    m = bench.prefix_dfao()
    ns = list(ns)
    top = max(ns)
    word = seq_window(bench.seq, 0, top)
    got = m.eval_many(ns)
    return [(n, g, circular_critical_exponent(word[:n])) for n, g in zip(ns, got)
            if g != circular_critical_exponent(word[:n])]


def factor_mismatches(bench: Workbench, pairs: list[tuple[int, int]]) -> list[tuple]:
    m = bench.factor_dfao()
    got = m.eval_many(pairs)
    out = []
    for (n, s), g in zip(pairs, got):
        want = circular_critical_exponent(seq_window(bench.seq, s, n))
        if g != want:
            out.append((n, s, g, want))
    return out


def random_factor_pairs(count: int, seed: int, max_n: int = 512, max_s: int = 4096) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randint(1, max_n), rng.randint(0, max_s)) for _ in range(count)]


@functools.lru_cache(maxsize=4096)
def _length_stats(n: int, seq: str):
    return length_stats_oracle(n, seq)


def length_stats_mismatches(bench: Workbench, ns: Iterable[int], which=("lcce", "gcce", "ace")) -> list[tuple]:
    ns = list(ns)
    machines = {"lcce": bench.lcce_dfao, "gcce": bench.gcce_dfao, "ace": bench.ace_dfao}
    got = {k: machines[k]().eval_many(ns) for k in which}
    out = []
    for idx, n in enumerate(ns):
        least, greatest, exps = _length_stats(n, bench.seq)
        want = {"lcce": least, "gcce": greatest, "ace": bench.encoding(exps).bitmask}
        for k in which:
            if got[k][idx] != want[k]:
                out.append((k, n, got[k][idx], want[k]))
    return out


def prop1_brute_force(length: int = 64, prefix: int = 2048) -> list[tuple[str, Fraction]]:
    """Factors of the tm prefix violating the critical-exponent statement."""
    word = seq_window("tm", 0, prefix)
    bad = []
    for size in range(1, length + 1):
        for x in sorted(distinct_factors(word, size)):
            ce = critical_exponent(x)
            if ce not in (Fraction(1), Fraction(3, 2), Fraction(2)) or (size >= 4 and ce != 2):
                bad.append((x, ce))
    return bad


# --------------------------------------------------------------------------
# reports


@dataclass
class TheoremReport:
    name: str
    result: bool | str
    states: int
    elapsed: float
    state_counts: dict[str, int] = field(default_factory=dict)
    first: dict[str, list] = field(default_factory=dict)
    extra: dict[str, object] = field(default_factory=dict)
    artifacts: list[Path] = field(default_factory=list)
    counterexample: object = None

    @property
    def ok(self) -> bool:
        return self.result is True or self.result == "built"

    def to_text(self, timing: bool = True) -> str:
        result = str(self.result).lower()
        ms = round(self.elapsed * 1000) if timing else 0
        head = f"theorem {self.name} result={result} states={self.states} elapsed_ms={ms}"
        for k, v in self.extra.items():
            head += f" {k}={v}"
        lines = [head]
        for k, v in self.state_counts.items():
            lines.append(f"states {k}: {v}")
        for k, vals in self.first.items():
            lines.append(f"first {k}: " + " ".join(_fmt_value(v) for v in vals))
        if self.counterexample is not None:
            lines.append(f"counterexample: {_fmt_value(self.counterexample)}")
        return "\n".join(lines)


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, tuple):
        return "(" + ",".join(_fmt_value(x) for x in v) + ")"
    if isinstance(v, dict):
        return " ".join(f"{k}={_fmt_value(x)}" for k, x in sorted(v.items()))
    if isinstance(v, list):
        return " ".join(_fmt_value(x) for x in v)
    return str(v)


TM_THEOREMS = ("prop1", "testpref", "testfac", "smallfactest", "largefactest",
               "dfao_prefix", "dfao_factor", "dfao_lcce", "dfao_gcce", "dfao_ace")
PF_THEOREMS = ("pf_a", "pf_b", "pf_c", "pf_d", "pf_e")
THEOREMS = TM_THEOREMS + PF_THEOREMS

# what each paperfolding item runs on the paperfolding workbench
_PF_ALIASES = {"pf_a": "testpref", "pf_b": "testfac", "pf_c": "smallfactest", "pf_d": "largefactest",
               "pf_e": "dfao_ace"}


class Runner:
    """Runs named theorems, sharing one workbench per sequence."""

    def __init__(self, cache_dir: str | Path | None = None, seed: int = 0):
        self.cache_dir = cache_dir
        self.seed = seed
        self.benches: dict[str, Workbench] = {}

    def bench(self, seq: str) -> Workbench:
        if seq not in self.benches:
            self.benches[seq] = Workbench(seq, self.cache_dir)
        return self.benches[seq]

    def run(self, name: str) -> TheoremReport:
        if name not in THEOREMS:
            raise KeyError(f"unknown theorem {name!r}; known: {', '.join(THEOREMS)}")
        largest_intermediate(reset=True)
        start = time.perf_counter()
        if name in _PF_ALIASES:
            report = self._run(self.bench("pf"), _PF_ALIASES[name])
            report.name = name
        else:
            report = self._run(self.bench("tm"), name)
        report.elapsed = time.perf_counter() - start
        biggest = largest_intermediate()
        if biggest:
            report.extra["largest_intermediate"] = biggest
        return report

    def _run(self, bench: Workbench, name: str) -> TheoremReport:
        if name == "prop1":
            return self._prop1(bench)
        if name in ("testpref", "testfac", "smallfactest", "largefactest"):
            return self._eval(bench, name)
        try:
            return self._dfao(bench, name)
        except PartitionError as exc:
            return TheoremReport(name, False, 0, 0.0, counterexample=exc.witness,
                                 extra={"accepted_by": _fmt_value(list(exc.accepted_by)) or "none"})

    def _prop1(self, bench: Workbench) -> TheoremReport:
        bad = prop1_brute_force()
        overlap_free, w1 = bench.evaluate("overlapfree")
        squares, w2 = bench.evaluate("squares")
        ok = not bad and overlap_free and squares
        rep = TheoremReport("prop1", ok, 1, 0.0)
        rep.extra.update(brute_force="ok" if not bad else f"{len(bad)}_violations",
                         overlap_free=str(overlap_free).lower(), squares=str(squares).lower())
        rep.counterexample = (bad[0] if bad else None) or w1 or w2
        return rep

    def _eval(self, bench: Workbench, name: str) -> TheoremReport:
        cat = bench.catalog
        families = {
            "testpref": [("prefge", cat.prefix), ("prefgt", cat.prefix), ("prefeq", cat.prefix)],
            "testfac": [("facge", cat.factor), ("facgt", cat.factor), ("faceq", cat.factor)],
            "smallfactest": [("fac", cat.least), ("facsmall", cat.least)],
            "largefactest": [("faclarge", cat.greatest)],
        }[name]
        counts = {"crep": bench.build_crep().reported_states}
        first: dict[str, list] = {}
        for family, exps in families:
            for r in exps:
                pname = family + bench._register(r)
                dfa = bench.predicate(pname)
                counts[pname] = dfa.reported_states
                if family == "faceq":
                    first[pname] = enumerate_accepted(dfa, 1)
                elif family in ("prefeq", "facsmall", "faclarge"):
                    first[pname] = enumerate_accepted(dfa, 12)
        value, witness = bench.evaluate(name)
        return TheoremReport(name, value, counts["crep"], 0.0, counts, first, counterexample=witness)

    def _dfao(self, bench: Workbench, name: str) -> TheoremReport:
        cat = bench.catalog
        builders = {
            "dfao_prefix": (bench.prefix_dfao, cat.prefix),
            "dfao_factor": (bench.factor_dfao, cat.factor),
            "dfao_lcce": (bench.lcce_dfao, cat.least),
            "dfao_gcce": (bench.gcce_dfao, cat.greatest),
            "dfao_ace": (bench.ace_dfao, None),
        }
        build, allowed = builders[name]
        m = build()
        rep = TheoremReport(name, "built", m.n_states, 0.0)
        values = outputs_on_positive(m)
        if allowed is not None:
            outside = sorted(v for v in values if v not in allowed)
            if outside:
                rep.result = False
                rep.extra["outside_catalog"] = _fmt_value(outside)
        else:
            rep.extra["distinct_outputs"] = len(values)
            if len(values) != cat.ace_sets:
                rep.result = False
        if name == "dfao_prefix":
            bad = prefix_mismatches(bench, range(1, 501))
        elif name == "dfao_factor":
            bad = factor_mismatches(bench, random_factor_pairs(1000, self.seed))
        else:
            which = {"dfao_lcce": ("lcce",), "dfao_gcce": ("gcce",), "dfao_ace": ("ace",)}[name]
            bad = length_stats_mismatches(bench, range(1, 129), which)
        rep.extra["oracle_mismatches"] = len(bad)
        if bad:
            rep.result = False
            rep.counterexample = bad[0]
        if bench.cache_dir is not None:
            rep.artifacts.append(bench.artifact_path(name))
        return rep


def run_theorem(name: str, runner: Runner | None = None) -> TheoremReport:
    return (runner if runner is not None else Runner()).run(name)
