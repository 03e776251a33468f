import os
import sys
from functools import lru_cache
from importlib import resources

import pytest
from hypothesis import settings

from tatehoch.specfile import load_spec

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")

CORPUS = ["field_q", "field_f7", "dual_f2", "dual_f5", "trunc_f11", "qext_f17", "group_f5c2"]


@lru_cache(maxsize=None)
def corpus(name):
    return load_spec(str(resources.files("tatehoch") / "corpus" / f"{name}.toml"))


def int_table(spec):
    return [[[int(x) for x in r] for r in m] for m in spec.algebra.table.tolist()]


@pytest.fixture(params=CORPUS)
def spec(request):
    return corpus(request.param)


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("CACHE_DIR", str(tmp_path / "cache"))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, title, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})")
