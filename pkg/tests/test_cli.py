import io
import json
import subprocess
import sys

import pytest

from waldperiods.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_MISMATCH, EXIT_OK, main


def run(argv, tmp_path=None):
    buf = io.StringIO()
    if tmp_path is not None:
        argv = argv + ["--cache-dir", str(tmp_path)]
    code = main(argv, buf)
    return code, buf.getvalue()


def test_verify_sylvester_json():
    code, out = run(["verify", "sylvester", "--p", "7"])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["ok"] and rep["beta"]["value"] == {"order": 1, "coeffs": ["1"]}
    assert rep["ratio"] == "2"
    assert rep["certificate"]["m_plus_one_equal"]
    assert rep["config"]["p"] == 7


def test_verify_sylvester_table():
    code, out = run(["verify", "sylvester", "--p", "13", "--format", "table"])
    assert code == EXIT_OK
    assert out.splitlines()[0] == "sylvester: PASS"
    assert "beta: 1/2" in out


def test_exit_codes():
    assert run(["verify", "sylvester", "--p", "5"])[0] == EXIT_CONFIG
    assert run(["verify", "sylvester", "--p", "7", "--cyclo-cap", "2"])[0] == EXIT_BUDGET
    assert run(["verify", "sylvester", "--p", "7", "--precision", "1"])[0] == EXIT_CONFIG
    assert run(["compute", "--theta", "{bad", "--chi", "x"])[0] == EXIT_CONFIG


def test_mismatch_exit_code(monkeypatch):
    import waldperiods.sylvester as syl

    monkeypatch.setitem(syl.EXPECTED_BETA, 7, syl.Fraction(3))
    assert run(["verify", "sylvester", "--p", "7"])[0] == EXIT_MISMATCH


def test_verify_small_sweeps():
    for target in ("sec24-diagonal", "prop-single", "prop-newform", "lemma-support"):
        code, out = run(["verify", target, "--p", "5", "--conductors", "2", "--theta-limit", "1"])
        assert code == EXIT_OK, target
        assert json.loads(out)["count"] > 0, target
    code, out = run(["verify", "cor-expansion", "--p", "3", "--conductors", "4", "--theta-limit", "1",
                     "--samples", "2"])
    assert code == EXIT_OK and json.loads(out)["count"] == 2


def test_compute_and_cache_round_trip(tmp_path):
    base = ["compute", "--D", "-3", "--vector", "newform"]
    code, direct = run(base + ["--theta", "sylvester-theta", "--chi", "sylvester-chi7"], tmp_path)
    assert code == EXIT_OK
    assert json.loads(direct)["value"] == {"order": 1, "coeffs": ["1"]}
    for name, spec in (("th", "sylvester-theta"), ("chi", "sylvester-chi7")):
        assert run(["cache", "put", "--D", "-3", "--name", name, "--char", spec], tmp_path)[0] == EXIT_OK
    listed = json.loads(run(["cache", "list"], tmp_path)[1])
    assert listed["names"] == ["chi", "th"]
    code, cached = run(base + ["--theta", "cache:th", "--chi", "cache:chi"], tmp_path)
    assert code == EXIT_OK
    assert cached == direct  # byte-identical report
    assert json.loads(run(["cache", "clear"], tmp_path)[1])["removed"] == 2
    assert run(base + ["--theta", "cache:th", "--chi", "cache:chi"], tmp_path)[0] == EXIT_CONFIG


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("WALDPERIODS_CACHE_DIR", str(tmp_path))
    code, out = run(["cache", "put", "--D", "-3", "--name", "x", "--char", "sylvester-chi4"])
    assert code == EXIT_OK
    assert (tmp_path / "x.chartable").exists()


def test_cache_version_refusal(tmp_path):
    run(["cache", "put", "--D", "-3", "--name", "x", "--char", "sylvester-chi4"], tmp_path)
    path = tmp_path / "x.chartable"
    path.write_text(path.read_text().replace("version 1", "version 2"))
    assert run(["cache", "show", "--D", "-3", "--name", "x"], tmp_path)[0] == EXIT_CONFIG


def test_compute_phase_and_json_character():
    spec = '{"c": 4, "generators": [[-1, 0], [1, 1], [1, -1], [1, 3]], "values": ["0", "1/3", "-1/3", "1/3"]}'
    code, out = run(["compute", "--D", "-3", "--theta", "sylvester-theta", "--chi", spec, "--vector", "translate:0,1"])
    assert code == EXIT_OK
    # chi of this table is the p = 4 mod 9 character; the phase needs n - l even
    assert run(["compute", "--D", "-3", "--theta", "sylvester-theta", "--chi", spec, "--phase"])[0] == EXIT_CONFIG


def test_deterministic_output():
    a = run(["verify", "sylvester", "--p", "31"])[1]
    b = run(["verify", "sylvester", "--p", "31"])[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "waldperiods", "verify", "sylvester", "--p", "43",
                           "--format", "table"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "beta: 1" in proc.stdout
