import csv
import io
import json
import subprocess
import sys

import pytest

from qharmonic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_json_envelope(capsys):
    code, out, _ = run(capsys, "disc", "--q", "1/2", "lambda", "--l", "1")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"command", "params", "rows", "provenance"}
    assert data["rows"][0]["lambda"] == -5
    assert data["params"]["mode"] == "exact"


def test_options_after_the_subcommand(capsys):
    code, out, _ = run(capsys, "qseries", "--q", "1/2", "gamma", "--x", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "3/2"


def test_float_mode_switch(capsys):
    code, out, _ = run(capsys, "disc", "lambda", "--l", "1/3", "--float", "--format", "csv")
    assert code == 0
    value = float(next(csv.DictReader(io.StringIO(out)))["lambda"])
    assert abs(value - (-0.8798065479201039)) < 1e-15


def test_output_is_byte_identical_across_runs(capsys):
    first = run(capsys, "bergman", "norms", "--lam", "5/2", "--N", "4")[1]
    second = run(capsys, "bergman", "norms", "--lam", "5/2", "--N", "4")[1]
    assert first == second


def test_out_file(tmp_path, capsys):
    target = tmp_path / "norms.csv"
    code, out, _ = run(capsys, "bergman", "norms", "--lam", "2", "--N", "3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[0] == "n,norm_sq,kernel_coeff,source"


@pytest.mark.parametrize(
    "expr,expected",
    [
        ("zs*z", {(0, 0): "3/4", (1, 1): "1/4"}),
        ("z*", {(0, 1): "1"}),
        ("(z* - 1)*z", {(0, 0): "3/4", (1, 0): "-1", (1, 1): "1/4"}),
    ],
)
def test_element_parsing(capsys, expr, expected):
    code, out, _ = run(capsys, "disc", "element", "--expr", expr, "--format", "csv")
    assert code == 0
    got = {(int(r["z_power"]), int(r["zs_power"])): r["coefficient"] for r in csv.DictReader(io.StringIO(out))}
    assert got == expected


def test_groebner_preset(capsys):
    code, out, _ = run(capsys, "groebner", "--preset", "anick_example", "--format", "csv")
    assert code == 0
    rules = [(r["lead"], r["tail"]) for r in csv.DictReader(io.StringIO(out)) if r["kind"] == "rule"]
    assert rules == [("x*y*y", "y*y*x"), ("x*x", "-y*y")]


def test_groebner_relation_file_round_trip(tmp_path, capsys):
    path = tmp_path / "disc.rel"
    code, direct, _ = run(capsys, "groebner", "--preset", "pol_disc", "--format", "csv", "--emit-relations", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0] == "alphabet: zs > z"
    code, reread, _ = run(capsys, "groebner", "--relations", str(path), "--format", "csv")
    assert code == 0
    assert reread.splitlines()[1:] == direct.splitlines()[1:]


def test_star_command(capsys):
    code, out, _ = run(capsys, "star", "--f", "zs", "--g", "z", "--K", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {(r["power"], r["z_power"], r["zs_power"]): r["coefficient"] for r in rows}[("1", "2", "2")] == "3/64"


@pytest.mark.parametrize(
    "argv,code,message",
    [
        (("groebner", "--preset", "anick_example", "--degree-cap", "2"), 3, "degree cap"),
        (("disc", "lambda", "--l", "1/3"), 1, "l:"),
        (("disc", "lambda", "--l", "abc"), 1, "l:"),
        (("qseries", "gamma", "--x", "-2", "--float"), 1, "x:"),
        (("bergman", "norms", "--lam", "1", "--N", "2"), 1, "lam:"),
        (("disc", "lambda"), 1, "--l"),
    ],
)
def test_failures_name_the_parameter(capsys, argv, code, message):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert message in err


def test_verify_passing_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "8", "--format", "csv")
    assert code == 0
    assert all(r["passed"] == "True" for r in csv.DictReader(io.StringIO(out)))


def test_verify_reports_failure_with_exit_code(capsys, monkeypatch):
    from qharmonic import verify
    from qharmonic.verify import Check

    monkeypatch.setitem(verify.SUITES, 8, ("Green suite", lambda seed: [Check("forced", False, "x")]))
    code, out, _ = run(capsys, "verify", "--suite", "8", "--format", "csv")
    assert code == 4
    assert "False" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qharmonic", "disc", "lambda", "--l", "2", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("2,")


def test_density_grid_includes_the_endpoints(capsys):
    code, out, _ = run(capsys, "disc", "density", "--points", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["density"]) == 0.0 and float(rows[1]["density"]) > 0
