"""Command-line interface.

Exit codes: 0 verified, 1 falsified or mismatch, 2 usage error, 3 resource
ceiling hit.
"""
from __future__ import annotations

import argparse
import logging
import os
import shutil
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .automata.dfa import ResourceCeilingError, enumerate_accepted, set_memory_ceiling
from .automata.dfao import PartitionError
from .automata.textio import loads, to_dot
from .logic.compiler import CompileError, PredicateStore
from .logic.parser import ParseError, parse_script
from .logic.script import ScriptError, run_commands
from .oracle import circular_critical_exponent, format_rational
from .sequences import SEQUENCES, seq_window
from .theorems import PF_THEOREMS, TM_THEOREMS, THEOREMS, Runner

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

CACHE_ENV = "CIRCEXP_CACHE_DIR"
CONFIG_ENV = "CIRCEXP_CONFIG"


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "circexp"


@dataclass
class Config:
    cache_dir: Path
    memory_ceiling: int | None = None
    seed: int = 0
    sequence: str = "tm"


def _parse_size(text: str) -> int:
    text = text.strip().upper()
    units = {"K": 1 << 10, "M": 1 << 20, "G": 1 << 30}
    if text and text[-1] in units:
        return int(float(text[:-1]) * units[text[-1]])
    return int(text)


def read_config_file(path: Path) -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for num, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{num}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def load_config(args: argparse.Namespace) -> Config:
    """Defaults, then the config file, then the environment, then flags."""
    values: dict[str, object] = {"cache_dir": default_cache_dir()}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        raw = read_config_file(Path(path))
        known = {f.name for f in fields(Config)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        values.update(raw)
    if os.environ.get(CACHE_ENV):
        values["cache_dir"] = os.environ[CACHE_ENV]
    for key in ("cache_dir", "memory_ceiling", "seed", "sequence"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = Config(
        cache_dir=Path(values["cache_dir"]),
        memory_ceiling=_parse_size(str(values["memory_ceiling"])) if values.get("memory_ceiling") else None,
        seed=int(values.get("seed", 0)),
        sequence=str(values.get("sequence", "tm")),
    )
    if cfg.sequence not in SEQUENCES:
        raise ValueError(f"unknown sequence {cfg.sequence!r}")
    return cfg


# --------------------------------------------------------------------------
# commands


def cmd_prove(args, cfg: Config) -> int:
    path = Path(args.script)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"circexp: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    try:
        commands = parse_script(text)
    except ParseError as exc:
        print(f"{path}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    store = PredicateStore(bindings={"T": cfg.sequence}, cache_dir=cfg.cache_dir)
    status = EXIT_OK
    try:
        for result in run_commands(commands, store):
            print(result.describe(timing=not args.no_timing), flush=True)
            if result.kind == "eval" and not result.value:
                status = EXIT_FALSE
    except ScriptError as exc:
        print(f"{path}:{exc.line}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    return status


def cmd_ccexp(args, cfg: Config) -> int:
    if args.word is not None:
        if not args.word:
            print("circexp: the empty word has no circular critical exponent", file=sys.stderr)
            return EXIT_USAGE
        print(format_rational(circular_critical_exponent(args.word)))
        return EXIT_OK
    if args.prefix is not None:
        n, s = args.prefix, 0
    else:
        n, s = args.factor
    if n < 1 or s < 0:
        print("circexp: need n >= 1 and s >= 0", file=sys.stderr)
        return EXIT_USAGE
    oracle = circular_critical_exponent(seq_window(cfg.sequence, s, n))
    if args.oracle_only:
        print(format_rational(oracle))
        return EXIT_OK
    bench = Runner(cfg.cache_dir, cfg.seed).bench(cfg.sequence)
    value = bench.prefix_dfao()(n) if args.prefix is not None else bench.factor_dfao()(n, s)
    print(format_rational(value))
    if args.oracle and value != oracle:
        print(f"circexp: MISMATCH automaton {format_rational(value)} vs oracle {format_rational(oracle)}",
              file=sys.stderr)
        return EXIT_FALSE
    return EXIT_OK


def cmd_theorem(args, cfg: Config) -> int:
    if args.all:
        names = list(TM_THEOREMS) + (list(PF_THEOREMS) if args.include_pf else [])
    elif args.name:
        names = [args.name]
    else:
        print("circexp: give a theorem name or --all", file=sys.stderr)
        return EXIT_USAGE
    unknown = [n for n in names if n not in THEOREMS]
    if unknown:
        print(f"circexp: unknown theorem {unknown[0]!r}; known: {', '.join(THEOREMS)}", file=sys.stderr)
        return EXIT_USAGE
    runner = Runner(cfg.cache_dir, cfg.seed)
    status = EXIT_OK
    for name in names:
        report = runner.run(name)
        print(report.to_text(timing=not args.no_timing), flush=True)
        if not report.ok:
            status = EXIT_FALSE
    return status


def _artifact(cfg: Config, name: str) -> Path:
    return cfg.cache_dir / "artifacts" / cfg.sequence / f"{name}.txt"


def cmd_export(args, cfg: Config) -> int:
    path = _artifact(cfg, args.name)
    if not path.exists():
        print(f"circexp: no automaton {args.name!r} for {cfg.sequence} in {cfg.cache_dir}; "
              "build it first with 'circexp theorem'", file=sys.stderr)
        return EXIT_FALSE
    text = path.read_text(encoding="utf-8")
    if args.format == "dot":
        text = to_dot(loads(text), args.name)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_enumerate(args, cfg: Config) -> int:
    path = _artifact(cfg, args.name)
    if not path.exists():
        print(f"circexp: no automaton {args.name!r} in the cache", file=sys.stderr)
        return EXIT_FALSE
    a = loads(path.read_text(encoding="utf-8"))
    if not hasattr(a, "accept"):
        print(f"circexp: {args.name} is a DFAO, not an acceptor", file=sys.stderr)
        return EXIT_USAGE
    for v in enumerate_accepted(a, args.count):
        print(" ".join(map(str, v)) if isinstance(v, tuple) else v)
    return EXIT_OK


def cmd_cache(args, cfg: Config) -> int:
    root = cfg.cache_dir
    if args.action == "path":
        print(root)
    elif args.action == "info":
        files = [p for p in root.rglob("*.txt")] if root.exists() else []
        size = sum(p.stat().st_size for p in files)
        print(f"{root}: {len(files)} automata, {size} bytes")
    elif args.action == "clear":
        if root.exists():
            shutil.rmtree(root)
        print(f"cleared {root}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", dest="cache_dir", help=f"cache directory (env {CACHE_ENV})")
    common.add_argument("--config", help=f"key=value config file (env {CONFIG_ENV})")
    common.add_argument("--memory-ceiling", dest="memory_ceiling", help="peak memory limit, e.g. 8G")
    common.add_argument("--seed", type=int, help="seed for randomized oracle checks")
    common.add_argument("--seq", dest="sequence", choices=sorted(SEQUENCES), help="sequence bound to T")
    common.add_argument("--no-timing", action="store_true", help="print zero for all timings")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="circexp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("prove", parents=[common], help="run a script of def/eval commands")
    sp.add_argument("script")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("ccexp", parents=[common], help="circular critical exponent")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--word")
    mode.add_argument("--prefix", type=int, metavar="N")
    mode.add_argument("--factor", type=int, nargs=2, metavar=("N", "S"))
    check = sp.add_mutually_exclusive_group()
    check.add_argument("--oracle", action="store_true", help="also compute by brute force and compare")
    check.add_argument("--oracle-only", action="store_true", help="brute force only, no automata")
    sp.set_defaults(func=cmd_ccexp)

    sp = sub.add_parser("theorem", parents=[common], help="run a named theorem")
    sp.add_argument("name", nargs="?", help=", ".join(THEOREMS))
    sp.add_argument("--all", action="store_true", help="run every Thue-Morse theorem")
    sp.add_argument("--include-pf", action="store_true", help="with --all, add the paperfolding runs")
    sp.set_defaults(func=cmd_theorem)

    sp = sub.add_parser("export", parents=[common], help="write a cached automaton")
    sp.add_argument("name")
    sp.add_argument("--format", choices=("text", "dot"), default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("enumerate", parents=[common], help="least accepted values of a cached acceptor")
    sp.add_argument("name")
    sp.add_argument("--count", type=int, default=10)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("cache", parents=[common], help="inspect or clear the cache")
    sp.add_argument("action", choices=("path", "info", "clear"))
    sp.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
    except (OSError, ValueError) as exc:
        print(f"circexp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    set_memory_ceiling(cfg.memory_ceiling)
    try:
        return args.func(args, cfg)
    except (ResourceCeilingError, MemoryError) as exc:
        print(f"circexp: resource ceiling hit: {exc or 'out of memory'}", file=sys.stderr)
        return EXIT_RESOURCE
    except PartitionError as exc:
        print(f"circexp: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except CompileError as exc:
        print(f"circexp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); stay quiet
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    finally:
        set_memory_ceiling(None)


if __name__ == "__main__":
    sys.exit(main())
