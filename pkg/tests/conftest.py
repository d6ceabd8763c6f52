from __future__ import annotations

import os

import pytest

from circexp.theorems import Runner

# filled by tests/test_acceptance.py, printed once at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_collection_modifyitems(config, items):
    if os.environ.get("CIRCEXP_PF") == "1":
        return
    skip = pytest.mark.skip(reason="paperfolding suite is opt-in: set CIRCEXP_PF=1")
    for item in items:
        if "pf" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("circexp-cache")


@pytest.fixture(scope="session")
def runner(cache_dir):
    return Runner(cache_dir, seed=20240611)


@pytest.fixture(scope="session")
def bench(runner):
    """Thue-Morse workbench shared by the whole session (crep is built once)."""
    return runner.bench("tm")


@pytest.fixture(scope="session")
def pf_bench(runner):
    return runner.bench("pf")
