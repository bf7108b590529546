import json
import shutil
import subprocess
import sys

import pytest

from normbrauer.cli import main
from normbrauer.normic import BrauerReport
from normbrauer.scenario import corpus_dir

EX = str(corpus_dir() / "ex31_klein.scn")
D3 = str(corpus_dir() / "dihedral3_l1.scn")


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_compute_biquadratic_pair(capsys):
    rc, out, _ = run(capsys, "compute", EX)
    assert rc == 0
    assert "order:       1" in out
    assert "cths:        Z/2" in out


def test_compute_dihedral3(capsys):
    rc, out, _ = run(capsys, "compute", D3)
    assert rc == 0
    assert "exact_group: Z/3" in out


def test_json_stdout_and_round_trip(capsys):
    rc, out, _ = run(capsys, "compute", D3, "--json", "-")
    assert rc == 0
    data = json.loads(out)
    rep = BrauerReport.from_json(data)
    assert rep.order == 3 and str(rep.exact_group) == "Z/3"


def test_json_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "compute", EX, "--json", str(a))[0] == 0
    assert run(capsys, "compute", EX, "--json", str(b), "--path", "both")[0] == 0
    c = tmp_path / "c.json"
    run(capsys, "compute", EX, "--json", str(c))
    assert a.read_bytes() == c.read_bytes()
    assert json.loads(b.read_text())["order"] == json.loads(a.read_text())["order"]


def test_bad_element_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.scn"
    p.write_text("name: b\ngroup: dihedral(3)\nfactor: [q] e=1\n")
    rc, _, err = run(capsys, "compute", str(p))
    assert rc == 2
    assert f"{p}:3:10:" in err


def test_hypothesis_error_exit_code(tmp_path, capsys):
    p = tmp_path / "e.scn"
    p.write_text("name: e\ngroup: cyclic(4)\ncomponent: []\nfactor: [1] e=4\nfactor: [1] e=1\n")
    rc, _, err = run(capsys, "compute", str(p))
    assert rc == 2 and "hypothesis" in err


def test_cap_exit_code(tmp_path, capsys):
    p = tmp_path / "c.scn"
    p.write_text(open(D3).read() + "caps: max_group_order=4\n")
    rc, _, err = run(capsys, "compute", str(p))
    assert rc == 2 and "cap exceeded" in err


def test_missing_file(capsys):
    assert run(capsys, "compute", "/nonexistent.scn")[0] == 2


def test_sweep_split_z4(capsys, tmp_path):
    out_json = tmp_path / "rows.json"
    rc, out, _ = run(capsys, "sweep", "split-polynomial", "--group", "cyclic(4)", "--json", str(out_json))
    assert rc == 0
    rows = json.loads(out_json.read_text())["rows"]
    by = {r["params"]: r for r in rows}
    assert by["e=1,1,2"]["V"] == "Z/2" and by["e=1,1,2"]["agree"] is True
    assert "e=1,1,2" in out


def test_sweep_cap_skips(capsys, monkeypatch):
    monkeypatch.setenv("NORMBRAUER_CAPS", "max_omega=3")
    rc, out, _ = run(capsys, "sweep", "dihedral", "--n", "3..4", "--l", "1")
    assert "skipped (cap)" in out
    assert rc == 0


def test_sweep_figure(tmp_path, capsys):
    png = tmp_path / "s.png"
    rc, _, _ = run(capsys, "sweep", "abelian", "--invariants", "4,2", "--figure", str(png))
    assert rc == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_oracle_commands(capsys):
    rc, out, _ = run(capsys, "oracle", "dihedral", "--n", "3")
    assert rc == 0 and json.loads(out)["group"] == "Z/3"
    rc, out, _ = run(capsys, "oracle", "coker-c", "--group", "dihedral(5)")
    assert json.loads(out)["group"] == "Z/5"
    rc, out, _ = run(capsys, "oracle", "split-polynomial", "--group", "cyclic(4)", "--e", "1,1,2")
    assert json.loads(out)["group"] == "Z/2"
    rc, out, _ = run(capsys, "oracle", "abelian-p", "--p", "2", "--s", "2", "--mu", "3")
    assert json.loads(out)["group"] == "Z/4"
    rc, out, _ = run(capsys, "oracle", "perfect", "--group", "abelian(2,2)", "--subgroup", "[]")
    assert json.loads(out)["group"] == "Z/2"
    rc, out, _ = run(capsys, "oracle", "lemmas", "--group", "dihedral(4)")
    assert json.loads(out)["cor"]["status"] == "pass"


def test_oracle_usage_errors(capsys):
    assert run(capsys, "oracle", "delta", "--group", "cyclic(4)")[0] == 2  # no default subgroup
    assert run(capsys, "oracle", "dihedral", "--n", "1")[0] == 2
    assert run(capsys, "sweep", "dihedral", "--n", "2..x")[0] == 2


def test_selftest_fast(capsys):
    rc, out, _ = run(capsys, "selftest", "fast")
    assert rc == 0
    assert "FAIL" not in out


def test_selftest_golden_level_is_consistent(capsys):
    rc, out, _ = run(capsys, "selftest", "paper")
    assert "golden corpus" in out
    assert rc == (1 if "FAIL" in out else 0)


@pytest.mark.skipif(shutil.which("normbrauer") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["normbrauer", "compute", D3], capture_output=True, text=True)
    assert p.returncode == 0 and "Z/3" in p.stdout
    p = subprocess.run([sys.executable, "-m", "normbrauer.cli", "oracle", "dihedral", "--n", "2", "--l", "2"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and "Z/2" in p.stdout
