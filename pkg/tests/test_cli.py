"""End-to-end command line behavior: reports, comparisons, corpus runs
with caching, and the exit code contract."""

import json
import subprocess
import sys

import pytest

from imqlink.cli import main
from imqlink.fixtures import FIXTURE_NAMES, fixture_text
from imqlink.quandle import parse_quandle

UNKNOT = json.dumps(
    {"arcs": ["z"], "components": [{"arcs": ["z"], "crossings": []}], "crossings": []}
)


def write_fixture(tmp_path, name):
    p = tmp_path / f"{name}.json"
    p.write_text(fixture_text(name))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_report_unknot(tmp_path, capsys):
    p = tmp_path / "unknot.json"
    p.write_text(UNKNOT)
    code, out, err = run(capsys, "report", str(p))
    assert code == 0
    assert "determinant: 1" in out
    assert "module: Z" in out
    assert "coset quandle: 1 elements" in out
    assert "checks passed: True" in out


def test_report_machine_fields(tmp_path, capsys):
    path = write_fixture(tmp_path, "trefoil")
    code, out, _ = run(capsys, "--format", "machine", "report", path)
    assert code == 0
    rep = json.loads(out)
    assert rep["determinant"] == 3
    assert rep["module"] == {"free_rank": 1, "torsion": [3], "text": "Z x Z/3"}
    assert rep["imq"] == {"size": 3, "orbit_sizes": [3]}
    assert rep["checks_passed"] is True


def test_report_machine_output_is_stable(tmp_path, capsys):
    path = write_fixture(tmp_path, "t22t24")
    _, first, _ = run(capsys, "--format", "machine", "report", path)
    _, second, _ = run(capsys, "--format", "machine", "report", path)
    assert first == second


def test_report_infinite_case(tmp_path, capsys):
    path = write_fixture(tmp_path, "lprime")
    code, out, _ = run(capsys, "--format", "machine", "report", path)
    assert code == 0
    rep = json.loads(out)
    assert rep["determinant"] == 0
    assert rep["arc_quandle"] == "infinite"
    assert rep["imq"] == "infinite"
    assert rep["module"]["free_rank"] == 2
    assert rep["module"]["torsion"] == [2, 2]


def test_report_no_imq_flag(tmp_path, capsys):
    path = write_fixture(tmp_path, "trefoil")
    code, out, _ = run(capsys, "--format", "machine", "--no-imq", "report", path)
    assert code == 0
    assert json.loads(out)["imq"] == "skipped"


def test_report_cap_exit(tmp_path, capsys):
    path = write_fixture(tmp_path, "t22t24")
    code, _, err = run(capsys, "--imq-cap", "2", "report", path)
    assert code == 3
    assert "resource cap" in err


def test_dump_quandle(tmp_path, capsys):
    path = write_fixture(tmp_path, "trefoil")
    out_path = tmp_path / "trefoil.quandle"
    code, _, _ = run(capsys, "report", path, "--dump-quandle", str(out_path))
    assert code == 0
    q = parse_quandle(out_path.read_text())
    assert q.n == 3


def test_dump_quandle_infinite(tmp_path, capsys):
    path = write_fixture(tmp_path, "fig5l")
    out_path = tmp_path / "never.quandle"
    code, _, err = run(capsys, "report", path, "--dump-quandle", str(out_path))
    assert code == 2
    assert not out_path.exists()
    assert "no finite presented quandle" in err


def test_parse_error_exit(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "report", str(p))
    assert code == 1
    assert "parse error" in err


def test_missing_file_exit(tmp_path, capsys):
    code, _, err = run(capsys, "report", str(tmp_path / "absent.json"))
    assert code == 1
    assert "cannot read" in err


def test_validation_error_exit(tmp_path, capsys):
    bad = json.loads(fixture_text("trefoil"))
    bad["crossings"][0][2] = "a"
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, _, err = run(capsys, "report", str(p))
    assert code == 2
    assert "validation error" in err


def test_usage_error_exit(capsys):
    code, _, err = run(capsys, "report")
    assert code == 1
    assert "usage error" in err
    code, _, err = run(capsys, "frobnicate")
    assert code == 1


def test_compare_hopf2_sixthree(tmp_path, capsys):
    a = write_fixture(tmp_path, "hopf2")
    b = write_fixture(tmp_path, "sixthree")
    code, out, _ = run(capsys, "--format", "machine", "compare", a, b)
    assert code == 0
    rec = json.loads(out)
    assert rec["module_isomorphic"] is True
    assert rec["marking_equivalent"] == "equivalent"
    assert rec["arc_quandle_isomorphic"] is True
    # the presented quandles still tell the two links apart
    assert rec["imq_isomorphic"] is False
    assert rec["h1_isomorphic"] is True
    assert rec["implication_chain_ok"] is True


def test_compare_det_zero_pair(tmp_path, capsys):
    a = write_fixture(tmp_path, "lprime")
    b = write_fixture(tmp_path, "ldprime")
    code, out, _ = run(capsys, "--format", "machine", "compare", a, b)
    assert code == 0
    rec = json.loads(out)
    assert rec["marking_equivalent"] == "not_equivalent"
    assert rec["marking_reason"] == "torsion parity profiles differ"
    assert rec["arc_quandle_isomorphic"] is None
    assert rec["imq_isomorphic"] is None
    assert rec["h1_isomorphic"] is True


def test_compare_text_output(tmp_path, capsys):
    a = write_fixture(tmp_path, "trefoil")
    b = write_fixture(tmp_path, "fig8")
    code, out, _ = run(capsys, "compare", a, b)
    assert code == 0
    assert "module_isomorphic: False" in out
    assert "module groups differ" in out


def _corpus_dir(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    for name in FIXTURE_NAMES:
        (d / f"{name}.json").write_text(fixture_text(name))
    return d


def test_corpus_cold_then_cached(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    corpus = _corpus_dir(tmp_path)
    code, out, _ = run(capsys, "--format", "machine", "corpus", str(corpus))
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["diagrams"] == len(FIXTURE_NAMES)
    assert data["summary"]["reported"] == len(FIXTURE_NAMES)
    assert data["summary"]["errors"] == 0
    assert data["summary"]["cache_hits"] == 0
    assert data["summary"]["all_property_checks_passed"] is True
    assert data["summary"]["imq_strictly_between_bounds"] == []
    assert (tmp_path / ".quandle-cache").exists()

    code, out, _ = run(capsys, "--format", "machine", "corpus", str(corpus))
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["cache_hits"] == len(FIXTURE_NAMES)
    assert all(r["cached"] for r in data["rows"])


def test_corpus_cache_env_and_flag(tmp_path, capsys, monkeypatch):
    corpus = _corpus_dir(tmp_path)
    env_cache = tmp_path / "env.cache"
    monkeypatch.setenv("QUANDLE_CACHE", str(env_cache))
    run(capsys, "corpus", str(corpus))
    assert env_cache.exists()

    flag_cache = tmp_path / "flag.cache"
    code, out, _ = run(
        capsys, "--format", "machine", "corpus", str(corpus), "--cache", str(flag_cache)
    )
    assert code == 0
    assert flag_cache.exists()
    # the explicit flag wins over the environment, starting cold
    assert json.loads(out)["summary"]["cache_hits"] == 0


def test_corpus_flags_change_cache_key(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    corpus = _corpus_dir(tmp_path)
    run(capsys, "corpus", str(corpus))
    code, out, _ = run(capsys, "--format", "machine", "--no-imq", "corpus", str(corpus))
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["cache_hits"] == 0
    for r in data["rows"]:
        assert r["imq"] == ("infinite" if r["determinant"] == 0 else "skipped")


def test_corpus_survives_one_bad_file(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    corpus = _corpus_dir(tmp_path)
    (corpus / "zzz-broken.json").write_text("[1, 2]")
    code, out, _ = run(capsys, "--format", "machine", "corpus", str(corpus))
    assert code == 1
    data = json.loads(out)
    assert data["summary"]["reported"] == len(FIXTURE_NAMES)
    assert data["summary"]["errors"] == 1
    errors = [r for r in data["rows"] if "error" in r]
    assert len(errors) == 1 and errors[0]["name"] == "zzz-broken"


def test_corpus_parallel_jobs(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    corpus = _corpus_dir(tmp_path)
    code, out, _ = run(capsys, "--format", "machine", "corpus", str(corpus), "--jobs", "3")
    assert code == 0
    data = json.loads(out)
    assert data["summary"]["reported"] == len(FIXTURE_NAMES)
    assert data["summary"]["all_property_checks_passed"] is True


def test_corpus_rejects_missing_dir(tmp_path, capsys):
    code, _, err = run(capsys, "corpus", str(tmp_path / "nope"))
    assert code == 1
    assert "not a directory" in err


def test_console_script(tmp_path):
    path = write_fixture(tmp_path, "hopf2")
    proc = subprocess.run(
        [sys.executable, "-m", "imqlink.cli", "--format", "machine", "report", path],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["determinant"] == 4
    assert rep["imq"] == {"size": 6, "orbit_sizes": [2, 2, 2]}
