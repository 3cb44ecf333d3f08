import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ltdenoise.cli import main
from ltdenoise.experiments import dolan_more_profile
from ltdenoise.fileformats import read_results, read_signal, write_signal


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def pair(tmp_path):
    exact, noisy = tmp_path / "exact.txt", tmp_path / "noisy.txt"
    assert run("gen", "--kind", "sine", "--n", 100, "--noise-std", 0.1, "--seed", 1,
               "--out-exact", exact, "--out-noisy", noisy) == 0
    return exact, noisy


def test_gen_zero_noise_files_match(tmp_path):
    e, y = tmp_path / "e.txt", tmp_path / "y.txt"
    assert run("gen", "--kind", "sine", "--n", 100, "--noise-std", 0, "--seed", 1,
               "--out-exact", e, "--out-noisy", y) == 0
    assert e.read_bytes() == y.read_bytes()
    assert len(read_signal(e)) == 100


def test_gen_is_byte_reproducible(tmp_path, pair):
    exact, noisy = pair
    e2, y2 = tmp_path / "e2.txt", tmp_path / "y2.txt"
    run("gen", "--kind", "sine", "--n", 100, "--noise-std", 0.1, "--seed", 1, "--out-exact", e2, "--out-noisy", y2)
    assert exact.read_bytes() == e2.read_bytes() and noisy.read_bytes() == y2.read_bytes()
    assert len(read_signal(noisy)) == 100


def test_denoise_affine_is_identity(tmp_path):
    src, out = tmp_path / "in.txt", tmp_path / "out.txt"
    write_signal(src, [1, 2, 3, 4, 5, 6])
    assert run("denoise", "--algo", "ltd", "--in", src, "--out", out, "--seed", 0) == 0
    assert read_signal(out).tolist() == [1, 2, 3, 4, 5, 6]


def test_denoise_reproducible_and_input_untouched(tmp_path, pair):
    _, noisy = pair
    before = noisy.read_bytes()
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run("denoise", "--algo", "ltd", "--in", noisy, "--out", a, "--seed", 7)
    run("denoise", "--algo", "ltd", "--in", noisy, "--out", b, "--seed", 7)
    assert a.read_bytes() == b.read_bytes()
    assert noisy.read_bytes() == before


def test_denoise_spike_report_and_trace(tmp_path, pair, capsys):
    exact, noisy = pair
    values = read_signal(noisy)
    values[50] += 1.0
    spiky = tmp_path / "spiky.txt"
    write_signal(spiky, values)
    trace = tmp_path / "trace.csv"
    capsys.readouterr()
    assert run("denoise", "--algo", "ltd", "--in", spiky, "--out", tmp_path / "o.txt",
               "--exact", exact, "--seed", 7, "--trace", trace) == 0
    report = capsys.readouterr().out.strip()
    assert "\n" not in report
    fields = dict(part.split("=") for part in report.split())
    assert float(fields["mse2"]) < float(fields["mse1"])
    rows = list(csv.reader(trace.open()))
    assert rows[0] == ["pass", "k", "E"] and len(rows) > 1


@pytest.mark.parametrize("algo", ["ma", "ssa", "hybrid"])
def test_denoise_other_algorithms(tmp_path, pair, algo):
    _, noisy = pair
    out = tmp_path / "o.txt"
    assert run("denoise", "--algo", algo, "--in", noisy, "--out", out, "--seed", 3) == 0
    assert len(read_signal(out)) == 100


def test_bench_and_profile(tmp_path, capsys):
    res = tmp_path / "r.json"
    assert run("bench", "--sizes", "100", "--trials", 1, "--algos", "ltd", "--seed", 0, "--out", res) == 0
    doc = json.loads(res.read_text())
    assert doc["schema_version"] == "1" and len(doc["records"]) == 1
    prof = tmp_path / "p.csv"
    assert run("profile", "--results", res, "--out", prof) == 0
    rows = list(csv.reader(prof.open()))
    assert rows[0] == ["algorithm", "tau", "rho"]
    assert all(float(r[2]) == 1.0 for r in rows[1:])


def test_bench_counts(tmp_path):
    res = tmp_path / "r.json"
    assert run("bench", "--sizes", "100,500", "--trials", 20, "--algos", "ma,ssa", "--seed", 4, "--out", res) == 0
    doc = json.loads(res.read_text())
    assert len(doc["records"]) == 80 and len(doc["aggregate"]) == 4


def test_profile_hand_built_document(tmp_path):
    recs = [dict(algorithm=a, n=10, seed=s, elapsed_seconds=t, mse1=0.0, mse2=0.0)
            for a, s, t in [("a", 1, 1.0), ("b", 1, 2.0), ("a", 2, 2.0), ("b", 2, 1.0)]]
    doc = tmp_path / "hand.json"
    doc.write_text(json.dumps({"schema_version": "1", "records": recs}))
    out = tmp_path / "p.csv"
    assert run("profile", "--results", doc, "--out", out) == 0
    rows = [r for r in csv.reader(out.open())][1:]
    assert rows == [["a", "1", "0.5"], ["a", "2", "1"], ["b", "1", "0.5"], ["b", "2", "1"]]


def test_profile_round_trip_matches_in_process(tmp_path):
    res, prof = tmp_path / "r.json", tmp_path / "p.csv"
    run("bench", "--sizes", "100", "--trials", 4, "--algos", "ltd,ssa,ma", "--seed", 2, "--out", res)
    run("profile", "--results", res, "--out", prof)
    _, records = read_results(res)
    expected = [[c.algorithm, tau, rho] for c in dolan_more_profile(records) for tau, rho in c.points]
    got = [[a, float(t), float(r)] for a, t, r in list(csv.reader(prof.open()))[1:]]
    assert got == expected


@pytest.mark.parametrize("argv,code", [
    (["gen", "--n", "10"], 1),
    (["bench", "--sizes", "100", "--algos", "bogus", "--seed", "0", "--out", "x.json"], 1),
    (["denoise", "--in", "missing.txt", "--out", "o.txt", "--seed", "0"], 2),
    (["profile", "--results", "missing.json", "--out", "p.csv"], 2),
    (["frobnicate"], 1),
])
def test_exit_codes(tmp_path, monkeypatch, capsys, argv, code):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == code
    err = capsys.readouterr().err.strip()
    assert err and "\n" not in err


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("value\n1\n2\nx\n")
    assert run("denoise", "--in", bad, "--out", tmp_path / "o.txt", "--seed", 0) == 2
    assert "line 4" in capsys.readouterr().err


def test_bad_param_values_are_usage_errors(tmp_path, pair):
    _, noisy = pair
    assert run("denoise", "--in", noisy, "--out", tmp_path / "o.txt", "--seed", 0, "--ratio", 2) == 1
    assert run("denoise", "--algo", "ma", "--in", noisy, "--out", tmp_path / "o.txt", "--seed", 0,
               "--window", 4) == 1


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ltdenoise", "denoise", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "--algo" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "ltdenoise", "gen"], capture_output=True, text=True)
    assert proc.returncode == 1
