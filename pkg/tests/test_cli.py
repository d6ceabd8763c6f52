from __future__ import annotations

import pytest

from circexp.cli import EXIT_FALSE, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, Config, _parse_size, load_config, main, \
    build_parser


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def script(tmp_path):
    def write(text):
        path = tmp_path / "s.txt"
        path.write_text(text)
        return str(path)
    return write


def test_ccexp_word(capsys):
    assert run(capsys, "ccexp", "--word", "amalgam") == (EXIT_OK, "5/2\n", "")
    assert run(capsys, "ccexp", "--word", "")[0] == EXIT_USAGE


def test_ccexp_prefix_and_factor(capsys, cache_dir):
    code, out, _ = run(capsys, "ccexp", "--prefix", "9", "--oracle", "--cache-dir", str(cache_dir))
    assert (code, out) == (EXIT_OK, "8/3\n")
    code, out, _ = run(capsys, "ccexp", "--factor", "7", "10", "--cache-dir", str(cache_dir))
    assert (code, out) == (EXIT_OK, "7/2\n")
    code, out, _ = run(capsys, "ccexp", "--factor", "7", "10", "--oracle-only")
    assert (code, out) == (EXIT_OK, "7/2\n")
    assert run(capsys, "ccexp", "--prefix", "0", "--oracle-only")[0] == EXIT_USAGE


def test_prove_success(capsys, script, tmp_path):
    path = script('def lt "x<y":\neval yes "E x,y $lt(x,y)":\n')
    code, out, _ = run(capsys, "prove", path, "--no-timing", "--cache-dir", str(tmp_path / "c"))
    assert code == EXIT_OK
    assert out == "lt: 2 states\nyes: true (1 states)\n"


def test_prove_false_eval(capsys, script, tmp_path):
    path = script('eval no "A n n>=3":\n')
    code, out, _ = run(capsys, "prove", path, "--no-timing", "--cache-dir", str(tmp_path / "c"))
    assert code == EXIT_FALSE
    assert "counterexample: n=0" in out


def test_prove_errors(capsys, script, tmp_path):
    c = str(tmp_path / "c")
    path = script('def a "x<y":\ndef b "x = = y":\n')
    code, _, err = run(capsys, "prove", path, "--cache-dir", c)
    assert code == EXIT_USAGE and err.startswith(f"{path}:2:12: ")
    path = script('eval b "$missing(1)":\n')
    code, _, err = run(capsys, "prove", path, "--cache-dir", c)
    assert code == EXIT_USAGE and err.startswith(f"{path}:1: ")
    assert run(capsys, "prove", str(tmp_path / "absent.txt"))[0] == EXIT_USAGE
    assert run(capsys, "prove", script(""), "--cache-dir", c)[0] == EXIT_OK


def test_theorem_command(capsys, cache_dir):
    code, out, _ = run(capsys, "theorem", "dfao_gcce", "--no-timing", "--cache-dir", str(cache_dir))
    assert code == EXIT_OK
    assert out.startswith("theorem dfao_gcce result=built states=9 elapsed_ms=0")
    assert run(capsys, "theorem", "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "theorem")[0] == EXIT_USAGE


def test_theorem_output_is_deterministic(capsys, cache_dir):
    first = run(capsys, "theorem", "testpref", "--no-timing", "--cache-dir", str(cache_dir))
    second = run(capsys, "theorem", "testpref", "--no-timing", "--cache-dir", str(cache_dir))
    assert first == second and first[0] == EXIT_OK
    assert "first prefeq73: 13 26 37 52 61 74 93" in first[1]


def test_export_and_enumerate(capsys, cache_dir, tmp_path):
    run(capsys, "theorem", "dfao_gcce", "--cache-dir", str(cache_dir))
    code, out, _ = run(capsys, "export", "dfao_gcce", "--format", "dot", "--cache-dir", str(cache_dir))
    assert code == EXIT_OK and out.startswith("digraph")
    target = tmp_path / "g.txt"
    assert run(capsys, "export", "dfao_gcce", "-o", str(target), "--cache-dir", str(cache_dir))[0] == EXIT_OK
    assert target.read_text().startswith("tracks: n\nkind: dfao\n")
    code, out, _ = run(capsys, "enumerate", "faclarge72", "--count", "4", "--cache-dir", str(cache_dir))
    assert (code, out) == (EXIT_OK, "7\n11\n19\n23\n")
    assert run(capsys, "enumerate", "dfao_gcce", "--cache-dir", str(cache_dir))[0] == EXIT_USAGE
    assert run(capsys, "export", "nothing", "--cache-dir", str(tmp_path / "empty"))[0] == EXIT_FALSE


def test_cache_commands(capsys, tmp_path, script):
    c = tmp_path / "cc"
    assert run(capsys, "cache", "path", "--cache-dir", str(c))[1] == f"{c}\n"
    run(capsys, "prove", script('def a "x<y":\n'), "--cache-dir", str(c))
    assert "1 automata" in run(capsys, "cache", "info", "--cache-dir", str(c))[1]
    assert run(capsys, "cache", "clear", "--cache-dir", str(c))[0] == EXIT_OK
    assert "0 automata" in run(capsys, "cache", "info", "--cache-dir", str(c))[1]


def test_memory_ceiling_exit_code(capsys, script, tmp_path):
    path = script('def q "E i,p (p>=1) & (i<n) & T[i]=T[i+p]":\n')
    code, _, err = run(capsys, "prove", path, "--memory-ceiling", "1K", "--cache-dir", str(tmp_path / "c"))
    assert code == EXIT_RESOURCE and "resource ceiling" in err


def test_unknown_subcommand(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "--help")[0] == EXIT_OK


def test_parse_size():
    assert _parse_size("8G") == 8 << 30
    assert _parse_size("512M") == 512 << 20
    assert _parse_size("100") == 100
    with pytest.raises(ValueError):
        _parse_size("lots")


def test_config_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "circexp.conf"
    conf.write_text("# comment\ncache_dir = /from/file\nseed = 5\nsequence = pf\n")
    monkeypatch.delenv("CIRCEXP_CACHE_DIR", raising=False)
    monkeypatch.setenv("CIRCEXP_CONFIG", str(conf))
    parser = build_parser()
    cfg = load_config(parser.parse_args(["cache", "path"]))
    assert (str(cfg.cache_dir), cfg.seed, cfg.sequence) == ("/from/file", 5, "pf")
    monkeypatch.setenv("CIRCEXP_CACHE_DIR", "/from/env")
    cfg = load_config(parser.parse_args(["cache", "path"]))
    assert str(cfg.cache_dir) == "/from/env"
    cfg = load_config(parser.parse_args(["cache", "path", "--cache-dir", "/from/flag", "--seed", "9"]))
    assert (str(cfg.cache_dir), cfg.seed) == ("/from/flag", 9)
    assert isinstance(cfg, Config)


def test_default_cache_dir(tmp_path, monkeypatch):
    for var in ("CIRCEXP_CACHE_DIR", "CIRCEXP_CONFIG"):
        monkeypatch.delenv(var, raising=False)
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path))
    cfg = load_config(build_parser().parse_args(["cache", "path"]))
    assert cfg.cache_dir == tmp_path / "circexp"
