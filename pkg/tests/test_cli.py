import csv
import io
import json
import subprocess
import sys

import pytest

from alpha2dynamo.cli import fmt, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_bessel_zeros():
    code, out, _ = call("bessel-zeros", "--l", "1", "--theta", "inf", "--count", "1")
    assert code == 0
    assert float(out) == pytest.approx(20.190729, rel=1e-7)
    code, out, _ = call("bessel-zeros", "--l", "1", "--count", "3")
    vals = [float(x) for x in out.split()]
    assert len(vals) == 3 and vals[0] == pytest.approx(9.86960440109, rel=1e-11)


def test_bounds_anchor():
    code, out, _ = call("bounds", "--l", "1", "--theta", "1", "--alpha-norm", "1.5", "--alpha-prime-norm", "15")
    assert code == 0
    d = dict(line.split(": ") for line in out.strip().splitlines())
    assert d["case"] == "i"
    assert float(d["a_theta"]) < 0 < float(d["b_theta"])
    assert d["relation"] == "A_SMALLER" and d["subcritical_split"] == "true"


def test_check():
    code, out, _ = call("check", "--anti-dynamo", "--l", "1", "--profile", "stefani:0.818")
    assert code == 0
    assert out.startswith("anti-dynamo lhs=") and out.strip().endswith("violated")
    code, out, _ = call("check", "--meet", "--stable2", "--local", "-9.86960440109", "--alpha-norm", "0.5",
                        "--alpha-prime-norm", "2", "--format", "records")
    doc = json.loads(out)
    assert [r["name"] for r in doc] == ["stable2", "meet", "local"]
    assert doc[1]["verdict"] == "satisfied"
    assert doc[2]["lhs"] == pytest.approx(doc[1]["lhs"], rel=1e-11)
    code, _, err = call("check", "--local", "-9.5", "--alpha-norm", "1", "--alpha-prime-norm", "1")
    assert code == 1 and "not an eigenvalue" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bessel-zeros", "--l", "0"],
        ["bessel-zeros", "--theta", "-2"],
        ["bounds", "--alpha-norm", "1"],
        ["bounds", "--profile", "const:1", "--alpha-norm", "1", "--alpha-prime-norm", "1"],
        ["check", "--alpha-norm", "1", "--alpha-prime-norm", "1"],
        ["spectrum", "--profile", "nope:1"],
        ["spectrum", "--profile", "const:1", "--grid", "8"],
        ["compare", "--grid", "ax3"],
        ["frobnicate"],
        ["bessel-zeros", "--bogus"],
        ["sweep", "--profile", "const:1", "--c-from", "1", "--c-to", "2", "--c-step", "0.5"],
    ],
)
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.startswith("error:") and err.count("\n") == 1


def test_enclosure_csv(tmp_path):
    f = tmp_path / "sigma.csv"
    code, _, _ = call("enclosure", "--alpha-norm", "1.5", "--alpha-prime-norm", "15", "--xi-min", "-40",
                      "--points", "20", "--out", str(f))
    assert code == 0
    rows = list(csv.reader(f.open()))
    assert rows[0] == ["xi", "eta"]
    body = [(float(a), float(b)) for a, b in rows[1:]]
    assert len(body) == 39
    assert body[19][1] == pytest.approx(0.0, abs=1e-8)
    assert [p[1] for p in body[20:]] == [-p[1] for p in reversed(body[:19])]
    strip = list(csv.reader((tmp_path / "sigma_strip.csv").open()))
    assert strip[0] == ["xi", "eta"] and len(strip) > 10


def test_compare_csv():
    code, out, _ = call("compare", "--l", "1", "--grid", "6x5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 30
    assert set(rows[0]) == {"t", "s", "k1", "k2", "k3", "k4m", "k4p", "k5", "verdict", "region"}
    assert {r["verdict"] for r in rows} <= {"A_SMALLER", "EQUAL", "B_SMALLER"}


def test_spectrum_formats():
    code, out, _ = call("spectrum", "--l", "1", "--profile", "const:0", "--grid", "64", "--count", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert float(rows[0]["re"]) == pytest.approx(-9.8696, rel=1e-3)
    code, out, _ = call("spectrum", "--l", "1", "--profile", "stefani:0.95", "--grid", "64", "--count", "2",
                        "--format", "records")
    doc = json.loads(out)
    assert doc["N"] == 128 and doc["theta"] == "1"
    assert doc["profile"] == {"kind": "stefani", "C": 0.95} or doc["profile"]["kind"] == "stefani"
    assert abs(doc["eigenvalues"][0]["im"]) > 1
    assert set(doc["bounds"]) >= {"a", "s", "b", "alpha_norm", "alpha_prime_norm"}


def test_verify_summary():
    code, out, _ = call("verify", "--l", "1", "--profile", "stefani:0.818", "--grid", "100", "--count", "6")
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.startswith("summary: PASS")


def test_sweep_small():
    code, out, _ = call("sweep", "--c-from", "0.7", "--c-to", "1.2", "--c-step", "0.1", "--grid", "128",
                        "--count", "2")
    assert code == 0
    traj, events = out.split("\n\n")
    assert traj.startswith("C,index,re,im,err")
    kinds = [r["event"] for r in csv.DictReader(io.StringIO(events))]
    assert kinds == ["MERGE", "CROSS", "REALIZE"]


def test_idempotent_and_round_trip():
    argv = ("compare", "--grid", "8x8")
    first, second = call(*argv)[1], call(*argv)[1]
    assert first == second
    buf = io.StringIO()
    rows = list(csv.reader(io.StringIO(first)))
    csv.writer(buf, lineterminator="\n").writerows(rows)
    assert buf.getvalue() == first
    for row in rows[1:]:
        for cell in row[:8]:
            if cell:
                assert fmt(float(cell)) == cell


def test_number_format():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(20.190728556426) == "20.1907285564"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "alpha2dynamo", "bessel-zeros", "--count", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.split()) == 2
    proc = subprocess.run([sys.executable, "-m", "alpha2dynamo", "bounds"], capture_output=True, text=True)
    assert proc.returncode == 1
