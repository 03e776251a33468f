import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from conftest import CORPUS, corpus
from tatehoch.cli import cache_dir, corpus_names, main, run
from tatehoch.errors import SpecError
from tatehoch.specfile import dump_spec, load_spec_text

BROKEN = """
[algebra]
name = "broken"
field = "F5"
basis = ["1", "x", "y"]
table = [
  [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  [[0, 1, 0], [0, 0, 1], [0, 0, 0]],
  [[0, 0, 1], [0, 1, 0], [0, 0, 0]],
]

[frobenius]
functional = [0, 0, 1]
"""


def json_report(capsys, *argv):
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_corpus_is_bundled():
    assert corpus_names() == sorted(CORPUS)


def test_tate_on_field_is_zero(capsys):
    code, rep = json_report(capsys, "tate", "field_f7", "--min", "-4", "--max", "4", "--engine", "both")
    assert code == 0
    assert all(v == {"formula": [0, 0], "stable": [0, 0]} for v in rep["results"]["degrees"].values())
    assert rep["checks"] == [{"name": "engines agree", "ok": True, "detail": []}]


def test_broken_associativity_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.toml"
    path.write_text(BROKEN)
    assert main(["validate", str(path)]) == 3
    assert "triple (1, 1, 1)" in capsys.readouterr().err


def test_parse_error_has_line(tmp_path, capsys):
    path = tmp_path / "bad.toml"
    text = dump_spec(corpus("dual_f5").algebra, [0, 1]).replace("functional = [0, 1]", 'functional = [0, "one"]')
    path.write_text(text)
    assert main(["validate", str(path)]) == 2
    line = 1 + text.splitlines().index('functional = [0, "one"]')
    assert f"line {line}" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["validate", "no-such-algebra"]) == 1
    with pytest.raises(SystemExit) as e:
        main(["frobnicate", "dual_f5"])
    assert e.value.code == 1


def test_check_dual_f5_passes(capsys):
    code, rep = json_report(capsys, "check", "dual_f5", "--no-cache")
    assert code == 0 and rep["ok"]
    assert len(rep["checks"]) >= 15


def test_determinism(capsys):
    out = [run(["check", "trunc_f11", "--no-cache", "--format", "json"])[1] for _ in range(2)]
    capsys.readouterr()
    assert out[0] == out[1]


def test_cache_hit_matches_cold_run(capsys):
    cold = run(["duality", "dual_f5", "--format", "json"])[1]
    capsys.readouterr()
    files = list(cache_dir().glob("*.json"))
    assert len(files) == 1
    warm = run(["duality", "dual_f5", "--format", "json"])[1]
    capsys.readouterr()
    assert warm == cold
    code, stats = json_report(capsys, "cache", "dual_f5", "--stats")
    assert stats["results"]["entries"] == 1
    code, cleared = json_report(capsys, "cache", "dual_f5", "--clear")
    assert cleared["results"]["cleared"] == 1
    assert not list(cache_dir().glob("*.json"))


def test_timings_only_on_request(capsys):
    code, rep = json_report(capsys, "validate", "dual_f5", "--timings")
    assert "seconds" in rep["timings"]
    code, rep = json_report(capsys, "validate", "dual_f5")
    assert "timings" not in rep


def test_text_and_json_tables_agree(capsys):
    code, rep = json_report(capsys, "hochschild", "dual_f5", "--max", "3")
    text = run(["hochschild", "dual_f5", "--max", "3"])[1]
    for row in rep["table"]["rows"]:
        assert any(line.split() == [str(x) for x in row] for line in text.splitlines())
    assert [r[1] for r in rep["table"]["rows"]] == [2, 1, 1, 1]


def test_csv_output(tmp_path):
    out = tmp_path / "ring.csv"
    code, _ = run(["ring", "dual_f5", "--max-deg", "1", "--format", "csv", "--output", str(out)])
    lines = out.read_text().splitlines()
    assert code == 0
    assert lines[0] == "i,j,dim H^i,dim H^j,nonzero products"
    assert len(lines) == 1 + 9


def test_ring_both_engines(capsys):
    code, rep = json_report(capsys, "ring", "dual_f2", "--max-deg", "1", "--engine", "both")
    assert code == 0
    assert {"name": "engines agree", "ok": True, "detail": None} in rep["checks"]


def test_frobenius_report(capsys):
    code, rep = json_report(capsys, "frobenius", "qext_f17")
    assert rep["results"]["nakayama_order"] == 16
    assert rep["results"]["symmetric"] is False


def test_module_option(capsys):
    code, rep = json_report(capsys, "tate", "dual_f5", "--module", "AA", "--min", "-2", "--max", "2")
    assert all(v["formula"] == [0, 0] for v in rep["results"]["degrees"].values())


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "tatehoch", "validate", "dual_f2", "--format", "json"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["results"]["dim"] == 2


@given(st.sampled_from(["dual_f5", "trunc_f11", "qext_f17", "field_q"]))
def test_spec_roundtrip(name):
    s = corpus(name)
    text = dump_spec(s.algebra, s.frobenius.lam)
    again = load_spec_text(text)
    assert again.digest == s.digest


def test_spec_errors():
    with pytest.raises(SpecError):
        load_spec_text('[algebra]\nfield = "F4"\nbasis = ["1"]\ntable = [[[1]]]\n[frobenius]\nfunctional = [1]\n')
    with pytest.raises(SpecError):
        load_spec_text("[algebra]\nfield = \"Q\"\nbasis = [\"1\"]\ntable = [[[1]]]\n")
