"""Run parsed scripts against a predicate store."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterator

from ..sequences import SEQUENCES
from .ast import free_vars
from .compiler import CompileError, PredicateStore, compile_formula, counterexample
from .parser import Define, Evaluate, UseSequence, parse_script


@dataclass
class CommandResult:
    kind: str  # "def", "eval" or "sequence"
    name: str
    line: int
    states: int = 0
    elapsed: float = 0.0
    value: bool | None = None
    counterexample: dict[str, int] | None = None

    def describe(self, timing: bool = True) -> str:
        ms = f", {round(self.elapsed * 1000)} ms" if timing else ""
        if self.kind == "sequence":
            return f"sequence T = {self.name}"
        if self.kind == "def":
            return f"{self.name}: {self.states} states{ms}"
        text = f"{self.name}: {'true' if self.value else 'false'} ({self.states} states{ms})"
        if self.counterexample is not None:
            pairs = " ".join(f"{k}={v}" for k, v in sorted(self.counterexample.items()))
            text += f"\n  counterexample: {pairs}"
        return text


class ScriptError(CompileError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line


def run_commands(commands, store: PredicateStore) -> Iterator[CommandResult]:
    """Execute commands in order, yielding one result per command."""
    for cmd in commands:
        if isinstance(cmd, UseSequence):
            if cmd.seq not in SEQUENCES:
                raise ScriptError(f"unknown sequence {cmd.seq!r}", cmd.line)
            store.bindings["T"] = cmd.seq
            yield CommandResult("sequence", cmd.seq, cmd.line)
            continue
        try:
            if isinstance(cmd, Define):
                pred = store.define(cmd.name, cmd.formula)
                yield CommandResult("def", cmd.name, cmd.line, pred.dfa.reported_states, pred.elapsed)
            elif isinstance(cmd, Evaluate):
                if free_vars(cmd.formula):
                    raise CompileError(f"eval needs a closed formula; free: {sorted(free_vars(cmd.formula))}")
                start = time.perf_counter()
                dfa = compile_formula(cmd.formula, store)
                value = bool(dfa.accept[0])
                witness = None if value else counterexample(cmd.formula, store)
                yield CommandResult("eval", cmd.name, cmd.line, dfa.reported_states,
                                    time.perf_counter() - start, value, witness)
        except ScriptError:
            raise
        except CompileError as exc:
            raise ScriptError(str(exc), cmd.line) from exc


def run_script(text: str, store: PredicateStore | None = None) -> list[CommandResult]:
    store = store if store is not None else PredicateStore()
    return list(run_commands(parse_script(text), store))
