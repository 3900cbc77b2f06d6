from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from k4e.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_KNOWN, EXIT_OK, EXIT_UNSUPPORTED, EXIT_VERIFY, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_json_and_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "d.json"
    code, _, _ = run(capsys, "construct", "--g", "2", "--n", "3", "--leave", "E2_2", "--out", str(path), "--trace")
    assert code == EXIT_OK
    data = json.loads(path.read_text())
    assert data["leave_class"] == {"tag": "E2_2", "paper_name": "E_{2,2}"}
    assert len(data["blocks"]) == 2 and "trace" in data
    code, out, _ = run(capsys, "verify", str(path), "--family", "mgdp", "--expect-leave", "E2_2")
    assert code == EXIT_OK and json.loads(out)["ok"]


@pytest.mark.parametrize("g,n,leave", [(4, 5, "E0"), (6, 3, "E3_1"), (11, 8, "E3_4"), (16, 4, "E1")])
def test_round_trip_for_other_types(capsys, tmp_path, g, n, leave):
    path = tmp_path / "d.json"
    assert run(capsys, "construct", "--g", str(g), "--n", str(n), "--leave", leave, "--out", str(path))[0] == EXIT_OK
    assert run(capsys, "verify", str(path), "--expect-leave", leave)[0] == EXIT_OK


def test_construct_text_format(capsys):
    code, out, _ = run(capsys, "construct", "--g", "2", "--n", "3", "--leave", "E2_2", "--format", "text")
    assert code == EXIT_OK
    assert "[0, 1, 2 - 5]" in out and "E_{2,2}" in out


@pytest.mark.parametrize(
    "argv,code,needle",
    [
        (["construct", "--g", "2", "--n", "3", "--leave", "E2_1"], EXIT_KNOWN, "Lemma 2.1"),
        (["construct", "--g", "2", "--n", "4", "--leave", "E4_1"], EXIT_KNOWN, "Lemma 2.3"),
        (["construct", "--g", "2", "--n", "4", "--leave", "E3_1"], EXIT_INPUT, "4"),
        (["construct", "--g", "2", "--n", "4", "--leave", "nope"], EXIT_INPUT, "unknown leave"),
        (["construct", "--g", "0", "--n", "4", "--leave", "E1"], EXIT_INPUT, "g >= 1"),
        (["construct", "--g", "17", "--n", "5", "--leave", "E0"], EXIT_UNSUPPORTED, "17^5"),
        (["construct", "--n", "4"], EXIT_INPUT, ""),
    ],
)
def test_construct_exit_codes(capsys, argv, code, needle):
    got, _, err = run(capsys, *argv)
    assert got == code and needle in err


def test_verify_catches_bad_files(capsys, tmp_path):
    path = tmp_path / "ex.json"
    assert run(capsys, "catalog", "dump", "ex1.6", "--out", str(path))[0] == EXIT_OK
    assert run(capsys, "verify", str(path), "--format", "text")[0] == EXIT_OK
    code, out, _ = run(capsys, "verify", str(path), "--expect-leave", "E2_1", "--format", "text")
    assert code == EXIT_VERIFY and "WrongLeaveClass" in out
    data = json.loads(path.read_text())
    data["blocks"].append(data["blocks"][0])
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == EXIT_VERIFY and "DuplicateEdge" in {v["kind"] for v in json.loads(out)["violations"]}
    path.write_text("{")
    assert run(capsys, "verify", str(path))[0] == EXIT_INPUT
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == EXIT_INPUT


def test_verify_other_families(capsys, tmp_path):
    path = tmp_path / "i.json"
    run(capsys, "catalog", "dump", "lem3.13", "--out", str(path))
    assert run(capsys, "verify", str(path), "--family", "igdd1")[0] == EXIT_OK
    assert run(capsys, "verify", str(path), "--family", "gdd")[0] == EXIT_VERIFY


def test_nonexist(capsys, tmp_path):
    code, out, _ = run(capsys, "nonexist", "--g", "3", "--n", "3", "--leave", "E2_1")
    assert code == EXIT_OK and json.loads(out)["conclusion"] == "nonexistent"
    code, out, _ = run(capsys, "nonexist", "--g", "2", "--n", "3", "--leave", "E2_2")
    assert code == EXIT_VERIFY and "witness" in json.loads(out)
    assert run(capsys, "nonexist", "--g", "4", "--n", "3", "--leave", "E3_3", "--budget", "10")[0] == EXIT_BUDGET
    assert run(capsys, "nonexist", "--g", "2", "--n", "3", "--leave", "E1")[0] == EXIT_INPUT
    code, out, _ = run(capsys, "nonexist", "--g", "2", "--n", "4", "--leave", "E4_1", "--format", "text", "--jobs", "2")
    assert code == EXIT_OK and "nonexistent" in out


def test_leaves(capsys):
    code, out, _ = run(capsys, "leaves", "--g", "3", "--n", "4", "--format", "text")
    assert out.strip() == ",".join(f"E4_{j}" for j in range(1, 12))
    _, out, _ = run(capsys, "leaves", "--g", "1", "--n", "8", "--format", "text")
    assert out.strip() == "E3_3,E3_4,E3_5"
    _, out, _ = run(capsys, "leaves", "--g", "1", "--n", "5")
    data = json.loads(out)
    assert data["short"] and data["leaves"] == []


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    ids = [row["id"] for row in json.loads(out)]
    assert code == EXIT_OK and "ex1.6" in ids and len(ids) == 60
    code, out, _ = run(capsys, "catalog", "dump", "lem5.13-7^3", "--format", "text")
    assert code == EXIT_OK and "29 blocks" in out
    assert run(capsys, "catalog", "dump", "nope")[0] == EXIT_INPUT
    assert run(capsys, "catalog", "dump")[0] == EXIT_INPUT


def test_no_cache_flag_and_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("K4E_CACHE_DIR", str(tmp_path))
    from k4e.ingredients import cache

    assert run(capsys, "construct", "--g", "1", "--n", "11", "--leave", "E0", "--no-cache")[0] == EXIT_OK
    assert cache.enabled() and not list(tmp_path.iterdir())


@pytest.mark.skipif(shutil.which("k4e") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["k4e", "leaves", "--g", "2", "--n", "3", "--format", "text"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "E2_2"
