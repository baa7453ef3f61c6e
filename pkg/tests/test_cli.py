import json
import subprocess
import sys

import pytest

from qitorsion.census import census, write_census_csv
from qitorsion.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_torsion_text(capsys):
    code, out, _ = run(capsys, "torsion", "--curve", "[0,1]")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Z/6"
    assert len(lines) == 1 + 6


def test_torsion_json(capsys):
    code, out, _ = run(capsys, "torsion", "--curve", "[-1,0]", "--json")
    data = json.loads(out)
    assert code == 0 and data["torsion"] == "Z/2xZ/4"
    assert sorted(p["order"] for p in data["points"]) == [1, 2, 2, 2, 4, 4, 4, 4]


@pytest.mark.parametrize("curve", ["[-3,2]", "[1,2", "[x,1]"])
def test_torsion_bad_curve(capsys, curve):
    code, _, err = run(capsys, "torsion", "--curve", curve)
    assert code == 1 and err.startswith("error:")


def test_census_csv_and_estimate(capsys, tmp_path):
    out_file = tmp_path / "c.csv"
    code, _, _ = run(capsys, "census", "--xmax", "100000", "--groups", "Z/2xZ/2,Z/2", "--out", str(out_file))
    assert code == 0
    text = out_file.read_text()
    assert text == write_census_csv(census([10**4, 10**5], groups=["Z/2", "Z/2xZ/2"]))
    assert text.splitlines()[1] == "Z/2,10000,429"
    assert text.splitlines()[3] == "Z/2xZ/2,10000,17"
    meta = json.loads((tmp_path / "c.csv.meta.json").read_text())
    assert meta["tally"] == "equals" and meta["grid"] == [10**4, 10**5]
    code, out, _ = run(capsys, "estimate-d", "--in", str(out_file))
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "group,inv_d_est,d_est,d_paper,residual"
    assert rows[1].startswith("Z/2,") and rows[1].split(",")[3] == "NA"
    assert rows[2].startswith("Z/2xZ/2,") and rows[2].split(",")[3] == "3"


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "--xmax", "1000", "--groups", "Z/2xZ/2", "--tally", "contains", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["metadata"]["tally"] == "contains"
    assert data["records"] == [{"group": "Z/2xZ/2", "X": 1000, "count": 8}]


def test_census_bad_grid(capsys):
    code, _, err = run(capsys, "census", "--xmax", "1000", "--grid", "10,5000")
    assert code == 1


def test_estimate_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "estimate-d", "--in", str(tmp_path / "nope.csv"))
    assert code == 1


def test_estimate_corrupt_file(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    code, _, err = run(capsys, "estimate-d", "--in", str(bad))
    assert code == 1 and "header" in err


@pytest.mark.parametrize(
    "a, want", [("1", ("2", "3", "1", "2", "4")), ("1-t", ("4", "6", "1", "1", "6"))]
)
def test_tate_convert(capsys, a, want):
    # b = d = -t: a = 1 is the Z/4 family, a = 1 - t the Z/5 family
    code, out, _ = run(capsys, "tate-convert", "--a", a, "--b=-t", "--d=-t")
    assert code == 0
    got = dict(line.split(" = ") for line in out.splitlines())
    assert (got["r"], got["s"], got["n"], got["m"], got["d"]) == want


def test_tate_convert_rational(capsys):
    code, out, _ = run(capsys, "tate-convert", "--a", "(t+1)/(t)", "--b", "t", "--d", "0")
    assert code == 0 and out.startswith("f = ")


def test_tate_convert_degenerate(capsys):
    code, _, err = run(capsys, "tate-convert", "--a", "0", "--b", "0", "--d", "0")
    assert code == 1 and "degenerate" in err


def test_family_count_exit_codes(capsys):
    code, _, err = run(capsys, "family-count", "--group", "Z/4", "--x", "1000000")
    assert code == 2 and "kappa" in err
    code, out, _ = run(capsys, "family-count", "--group", "Z/4", "--x", "100000", "--kappa", "1", "--no-validate")
    assert code == 0 and out.startswith("s2 = ")


def test_probe(capsys):
    code, out, _ = run(capsys, "probe", "--coprimality", "--samples", "20000", "--bound", "1000000")
    assert code == 0 and abs(float(out) - 0.6637) < 0.02
    code, out, _ = run(capsys, "probe", "--lemma46", "--group", "Z/2xZ/2", "--samples", "200")
    assert code == 0 and out.startswith("Z/2xZ/2: 2 distinct q")
    code, _, _ = run(capsys, "probe", "--lemma46", "--group", "Z/13")
    assert code == 1
    code, _, _ = run(capsys, "probe", "--lemma46")
    assert code == 1


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["torsion"])
    assert exc.value.code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qitorsion", "torsion", "--curve", "[1,0]"],  # x(x+i)(x-i)
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "Z/2xZ/2"
