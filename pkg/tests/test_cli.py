import json
import math

import pytest

from mobshift import cli
from mobshift.errors import NumericsError


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- weights


def test_weights_holomorphic_lambda_one(capsys):
    code, out, _ = run(capsys, ["weights", "--series", "holo", "--lambda", "1", "--n0", "0", "--n1", "4"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,re,im,abs"
    assert len(lines) == 6
    for line in lines[1:]:
        _, re, im, mag = line.split(",")
        assert float(re) == 1.0 and float(im) == 0.0 and float(mag) == 1.0


def test_weights_holomorphic_lambda_two_first_value(capsys):
    code, out, _ = run(capsys, ["weights", "--series", "holo", "--lambda", "2", "--n0", "0", "--n1", "0"])
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert float(row[1]) == pytest.approx(math.sqrt(0.5), abs=1e-10)


def test_weights_reducible_seam(capsys):
    code, out, _ = run(
        capsys,
        ["weights", "--series", "reducible", "--lambda", "1", "--r", "0.5", "--n0", "-2", "--n1", "0"],
    )
    assert code == 0
    values = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert values == [1.0, 0.5, 1.0]


def test_weights_json_format(capsys):
    code, out, _ = run(
        capsys,
        ["weights", "--series", "principal", "--lambda", "0.3", "--im-mu", "0.7",
         "--branch", "T3", "--n0", "0", "--n1", "1", "--format", "json"],
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert len(rows) == 2
    assert rows[0]["abs"] == pytest.approx(1.0, abs=1e-12)


def test_weights_invalid_parameters_exit_two(capsys):
    code, _, err = run(capsys, ["weights", "--series", "holo", "--lambda", "0", "--n0", "0", "--n1", "2"])
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------- verify


def test_verify_lemmas(capsys):
    code, out, _ = run(capsys, ["verify", "lemmas", "--samples", "100", "--seed", "42"])
    assert code == 0
    reports = [json.loads(line) for line in out.strip().splitlines()]
    assert len(reports) == 200
    assert all(r["pass"] for r in reports)
    assert all(r["value"] <= 1e-10 for r in reports)


def test_verify_homogeneity_principal(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "homogeneity", "--series", "principal", "--lambda", "0.3", "--im-mu", "0.5",
         "--op", "T2", "--path", "L:0.1"],
    )
    assert code == 0
    report = json.loads(out.strip().splitlines()[0])
    assert report["pass"] and report["value"] <= 1e-6
    assert report["context"]["path"] == "L:0.1"


def test_verify_homogeneity_default_paths(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "homogeneity", "--series", "holo", "--lambda", "2", "--op", "T1"],
    )
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_verify_reducible_lambda_failure_exit_one(capsys):
    code, out, _ = run(capsys, ["verify", "reducible-lambda", "--lambda", "1.5", "--r", "1"])
    assert code == 1
    report = json.loads(out.strip().splitlines()[0])
    assert report["value"] == pytest.approx(0.5, abs=1e-12)
    assert not report["pass"]


def test_verify_unitarity(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "unitarity", "--series", "complementary", "--lambda", "0.4", "--mu", "0.2"],
    )
    assert code == 0
    reports = [json.loads(line) for line in out.strip().splitlines()]
    assert len(reports) == 4 and all(r["pass"] for r in reports)


def test_verify_infinitesimal_antiholomorphic(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "infinitesimal", "--series", "antiholo", "--lambda", "0.5", "--op", "T1star",
         "--N", "32", "--pad", "8"],
    )
    assert code == 0
    reports = [json.loads(line) for line in out.strip().splitlines()]
    assert len(reports) == 8 and all(r["pass"] for r in reports)


def test_verify_normalizer_uses_deep_padding(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "normalizer", "--series", "principal", "--lambda", "0.3", "--im-mu", "0.5",
         "--op", "T2", "--path", "L:0.1"],
    )
    assert code == 0
    report = json.loads(out.strip().splitlines()[0])
    assert report["context"]["padding"] == 24
    assert report["pass"]


def test_verify_incompatible_operator_exit_two(capsys):
    code, _, err = run(
        capsys,
        ["verify", "homogeneity", "--series", "principal", "--lambda", "0.3", "--op", "T1"],
    )
    assert code == 2 and "error" in err


def test_numerical_failures_exit_three(capsys, monkeypatch):
    def boom(args):
        raise NumericsError("synthetic failure")

    monkeypatch.setitem(cli._SUITE_RUNNERS, "lemmas", boom)
    code, _, err = run(capsys, ["verify", "lemmas"])
    assert code == 3
    assert "numerical failure" in err


# ---------------------------------------------------------------- classify


def write_coeffs(tmp_path, name, rows):
    path = tmp_path / name
    path.write_text("n,re,im\n" + "\n".join(rows) + "\n")
    return str(path)


def test_classify_constant_file(capsys, tmp_path):
    path = write_coeffs(tmp_path, "const.csv", [f"{n},1.0,0.0" for n in range(-10, 11)])
    code, out, _ = run(capsys, ["classify", "--file", path, "--lambda", "0.3", "--mu-re", "0.35", "--mu-im", "0.7"])
    assert code == 0
    assert json.loads(out)["branch"] == "T2branch"


def test_classify_rational_file(capsys, tmp_path):
    lam, mu = 0.3, complex(0.35, 0.7)
    rows = []
    for n in range(-10, 11):
        a = (lam + mu + n) / (n + 1.0 - mu)
        rows.append(f"{n},{a.real!r},{a.imag!r}")
    path = write_coeffs(tmp_path, "rational.csv", rows)
    code, out, _ = run(capsys, ["classify", "--file", path, "--lambda", "0.3", "--mu-re", "0.35", "--mu-im", "0.7"])
    assert code == 0
    assert json.loads(out)["branch"] == "T3branch"


def test_classify_quadratic_is_neither_exit_one(capsys, tmp_path):
    path = write_coeffs(tmp_path, "quad.csv", [f"{n},{float(n * n)!r},0.0" for n in range(-10, 11)])
    code, out, _ = run(capsys, ["classify", "--file", path, "--lambda", "0.3", "--mu-re", "0.35", "--mu-im", "0.7"])
    assert code == 1
    assert json.loads(out)["branch"] == "neither"


def test_classify_malformed_file_exit_two(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("n,re\n0,not-a-number\n")
    code, _, err = run(capsys, ["classify", "--file", str(path), "--lambda", "0.3", "--mu-re", "0.35"])
    assert code == 2 and "error" in err


# ---------------------------------------------------------------- sweep


def test_sweep_complementary_midpoints(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--series", "complementary", "--lambda-grid=-0.5,0,0.5", "--suites", "unitarity"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("series,lambda,mu_re,mu_im")
    assert len(lines) == 4
    assert all(line.endswith("pass") for line in lines[1:])
    assert lines[2].split(",")[2] == "0.5"  # lam = 0 midpoint


def test_sweep_empty_grid(capsys):
    code, out, _ = run(capsys, ["sweep", "--series", "principal", "--lambda-grid", ""])
    assert code == 0
    assert out.strip().splitlines() == ["series,lambda,mu_re,mu_im,N,padding,suites,max_defect,status"]


def test_sweep_principal_grid(capsys):
    grid = ",".join(f"{v:.1f}" for v in [x / 10 for x in range(-9, 11)])
    code, out, _ = run(
        capsys,
        ["sweep", "--series", "principal", f"--lambda-grid={grid}", "--im-mu-grid", "0.5,2",
         "--suites", "unitarity", "--path", "L:0.1"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1 + 20 * 2
    assert all(line.endswith("pass") for line in lines[1:])


# ---------------------------------------------------------------- determinism


def test_identical_runs_are_byte_identical(capsys):
    argv = ["verify", "lemmas", "--samples", "25", "--seed", "7"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second

    argv = ["sweep", "--series", "complementary", "--lambda-grid", "0.4", "--suites", "unitarity,homogeneity"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_reports_carry_reproducing_context(capsys):
    code, out, _ = run(
        capsys,
        ["verify", "unitarity", "--series", "principal", "--lambda", "0.3", "--im-mu", "0.5"],
    )
    assert code == 0
    for line in out.strip().splitlines():
        ctx = json.loads(line)["context"]
        assert {"series", "lam", "mu", "N", "padding", "path"} <= set(ctx)
