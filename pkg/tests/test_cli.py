import json
import subprocess
import sys

import pytest

from integen.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run


def generate(path, *extra):
    return run(["generate", "--count", "3", "--seed", "42", "--method", "poly", "--out", str(path), *extra])


def test_generate_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert generate(a) == EXIT_OK and generate(b) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_bytes().split(b"\n")
    assert len(lines) == 4 and lines[-1] == b""
    assert [json.loads(line)["id"] for line in lines[:-1]] == [0, 1, 2]


def test_verify_generated_file(tmp_path, capsys):
    path = tmp_path / "d.jsonl"
    generate(path)
    capsys.readouterr()
    assert run(["verify", "--in", str(path)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "3 pass, 0 fail"


def test_stats(tmp_path, capsys):
    path = tmp_path / "d.jsonl"
    generate(path)
    capsys.readouterr()
    assert run(["stats", "--in", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["count", "3"]
    close = float(next(line for line in out.splitlines() if line.startswith("close_fraction")).split()[-1])
    assert 0 <= close <= 1


def test_stats_csv(tmp_path, capsys):
    path, csv = tmp_path / "d.jsonl", tmp_path / "h.csv"
    generate(path)
    assert run(["stats", "--in", str(path), "--csv", str(csv)]) == EXIT_OK
    rows = csv.read_text().splitlines()
    assert rows[0] == "kind,length,count"
    assert sum(int(r.split(",")[2]) for r in rows[1:] if r.startswith("integrand")) == 3


def test_stdout_is_default(capsys):
    assert run(["generate", "--count", "2", "--seed", "1"]) == EXIT_OK
    captured = capsys.readouterr()
    assert len(captured.out.splitlines()) == 2
    assert "generating" in captured.err


def test_seed_from_environment(tmp_path, monkeypatch):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    monkeypatch.setenv("INTEGEN_SEED", "42")
    assert run(["generate", "--count", "3", "--method", "poly", "--out", str(a)]) == EXIT_OK
    monkeypatch.delenv("INTEGEN_SEED")
    generate(b)
    assert a.read_bytes() == b.read_bytes()


def test_job_count_does_not_change_output(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    args = ["generate", "--count", "20", "--seed", "5"]
    assert run(args + ["--out", str(a)]) == EXIT_OK
    assert run(args + ["--out", str(b), "--jobs", "2"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_verify_reports_corruption(tmp_path, capsys):
    path = tmp_path / "d.jsonl"
    generate(path)
    lines = path.read_text().splitlines()
    rec = json.loads(lines[1])
    rec["integral_prefix"] = ["x"]
    lines[1] = json.dumps(rec)
    path.write_text("\n".join(lines + ["{broken"]) + "\n")
    capsys.readouterr()
    assert run(["verify", "--in", str(path)]) == EXIT_FAIL
    captured = capsys.readouterr()
    assert captured.out.strip() == "2 pass, 2 fail"
    assert "record 1" in captured.err and "invalid JSON" in captured.err


@pytest.mark.parametrize("argv", [
    ["generate", "--extension", "exp", "--arctan"],
    ["generate", "--count", "0"],
    ["generate", "--seed", "-4"],
    ["generate", "--method", "fwd"],
    ["generate", "--tower-height", "3"],
    ["generate", "--method", "hermite", "--max-theta-degree", "1"],
    ["verify"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().err


def test_bad_seed_in_environment(monkeypatch):
    monkeypatch.setenv("INTEGEN_SEED", "lots")
    assert run(["generate", "--count", "1"]) == EXIT_USAGE


def test_missing_input_is_a_runtime_failure(tmp_path):
    assert run(["verify", "--in", str(tmp_path / "none.jsonl")]) == EXIT_FAIL
    assert run(["stats", "--in", str(tmp_path / "none.jsonl")]) == EXIT_FAIL


def test_stats_of_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert run(["stats", "--in", str(path)]) == EXIT_FAIL


def test_help(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "generate" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.jsonl"
    proc = subprocess.run([sys.executable, "-m", "integen", "generate", "--count", "2", "--seed", "3",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "integen", "verify", "--in", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "2 pass, 0 fail"
