import json
import shutil
import subprocess
import sys

import pytest

from restrix import tables
from restrix.cli import main


def test_validate_bundled(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "L3(3): ok" in out and "mod 3" in out


def test_validate_catches_bad_table(tmp_path, capsys):
    data = tables.dump(tables.load_table("L3_3"))
    data["irreducibles"][2]["values"][3] = "5"
    (tmp_path / "L3_3.json").write_text(json.dumps(data))
    assert main(["validate", str(tmp_path)]) == 1
    assert "FAIL" in capsys.readouterr().out.upper()


def test_corpus_from_env(tmp_path, monkeypatch, capsys):
    shutil.copy(tables.corpus_dir() / "L2_25.json", tmp_path / "L2_25.json")
    monkeypatch.setenv(tables.CORPUS_ENV, str(tmp_path))
    assert main(["validate"]) == 0
    assert capsys.readouterr().out.strip() == "L2(25): ok"


def test_classify_json_and_report(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["classify", "--ambient", "2F4p", "--prime", "3", "--json", str(out),
                 "--report", str(tmp_path / "rep")]) == 0
    assert "irreducible: phi4" in capsys.readouterr().out
    verdicts = json.loads(out.read_text())["verdicts"]
    assert verdicts and {v["prime"] for v in verdicts} == {3}
    names = {p.name for p in (tmp_path / "rep").iterdir()}
    assert {"classify_2F4p_3.json", "classify_2F4p_3.tsv", "classify_2F4p_3.txt",
            "classify_2F4p_3.exceptions.tsv", "classify_2F4p_3.png"} <= names


def test_classify_exceptions_format(capsys):
    assert main(["classify", "--ambient", "2F4p", "--prime", "13", "--format", "exceptions"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6 and all(line.split("\t")[2] == "26" for line in lines)


def test_classify_bad_prime(capsys):
    assert main(["classify", "--ambient", "2F4p", "--prime", "4"]) == 2
    with pytest.raises(SystemExit):
        main(["classify", "--ambient", "2F4p", "--prime", "x"])


def test_restrict(capsys, tmp_path):
    assert main(["restrict", "--ambient", "2F4p", "--sub", "L3_3", "--char", "chi2"]) == 0
    assert "chi2 (26) -> L3(3): chi8  [4 of 4 fusions]" in capsys.readouterr().out
    dest = tmp_path / "r.json"
    assert main(["restrict", "--ambient", "2F4p", "--sub", "L3_3", "--char", "chi6", "--prime", "3",
                 "--json", str(dest)]) == 0
    assert json.loads(dest.read_text())[0]["degree"] == 78
    assert "[4 of 4 fusions]" in capsys.readouterr().out
    assert main(["restrict", "--ambient", "2F4p", "--sub", "L3_3", "--char", "nope"]) == 2


def test_fusions(capsys, tmp_path):
    dest = tmp_path / "f.json"
    assert main(["fusions", "--sub", "L3_3", "--ambient", "2F4p", "--json", str(dest)]) == 0
    assert "4 admissible fusion(s)" in capsys.readouterr().out
    data = json.loads(dest.read_text())
    assert all(f[data["sub_classes"].index("4A")] == "4C" for f in data["fusions"])
    assert main(["fusions", "--sub", "A6_2_2", "--ambient", "L3_3"]) == 1


def test_reduction_and_parabolic(tmp_path, capsys):
    assert main(["reduction", "--spot-check-n", "10", "--report", str(tmp_path)]) == 0
    assert capsys.readouterr().out.count("certified") == 10
    assert (tmp_path / "reduction.png").exists() and (tmp_path / "reduction.tsv").exists()
    dest = tmp_path / "c.json"
    assert main(["reduction", "--case", "2", "--json", str(dest)]) == 0
    rep = json.loads(dest.read_text())[0]
    capsys.readouterr()
    assert {"case", "certificate_kind", "shift_point", "status"} <= set(rep)
    assert main(["parabolic", "--report", str(tmp_path)]) == 0
    assert capsys.readouterr().out.count(": certified") == 7
    assert (tmp_path / "parabolic.png").exists()
    assert main(["parabolic", "--row", "chi34"]) == 0
    assert "q=8: u=-1024, v=-896" in capsys.readouterr().out
    assert main(["reduction", "--case", "99"]) == 2


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "restrix.cli", "reduction", "--case", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "certified" in r.stdout
