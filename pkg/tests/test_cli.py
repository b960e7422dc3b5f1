import json
import math

import pytest
from click.testing import CliRunner

from schwarzpick.harness.cli import main, parse_complex

POLYDISC = '{"type":"polydisc","d":2}'
ANNULUS = '{"type":"annulus","r":0.25}'


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return invoke


def test_parse_complex_forms():
    assert parse_complex("0.5") == 0.5
    assert parse_complex("0.1+0.2i") == 0.1 + 0.2j
    assert parse_complex(" -0.3j ") == -0.3j


def test_dist_polydisc(run):
    res = run("dist", "--domain", POLYDISC, "--z", "0.5,0", "--w", "-0.5,0")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["d_delta"] == pytest.approx(0.8, abs=1e-15)
    assert out["caratheodory"] == pytest.approx(math.atanh(0.8), abs=1e-14)
    assert out["margin_z"] == pytest.approx(0.5) and out["ill_conditioned"] is False


def test_dist_domain_file(run, tmp_path):
    spec = tmp_path / "annulus.json"
    spec.write_text(ANNULUS)
    res = run("dist", "--domain", str(spec), "--z", "0.5", "--w", "-0.5")
    assert res.exit_code == 0
    assert json.loads(res.output)["d_delta"] == pytest.approx(0.8, abs=1e-12)


@pytest.mark.parametrize("args", [
    ("--domain", POLYDISC, "--z", "1.5,0", "--w", "0,0"),          # outside
    ("--domain", '{"type":"polydisc"', "--z", "0,0", "--w", "0,0"),  # bad JSON
    ("--domain", "/nonexistent/spec.json", "--z", "0", "--w", "0"),
    ("--domain", POLYDISC, "--z", "0.1", "--w", "0,0"),              # wrong dimension
])
def test_dist_errors_exit_2(run, args):
    assert run("dist", *args).exit_code == 2


def test_dist_bad_complex_is_usage_error(run):
    assert run("dist", "--domain", POLYDISC, "--z", "abc,0", "--w", "0,0").exit_code == 2


def test_extremal_with_eval(run, tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("# points\n0.1,0.2\n-0.3i,0.4\n")
    out = tmp_path / "vals.csv"
    res = run("extremal", "--domain", POLYDISC, "--z", "0.5,0.1", "--w", "-0.2,0.3i",
              "--eval", str(pts), "--out", str(out))
    assert res.exit_code == 0
    summary = json.loads(res.output)
    assert summary["equality_residual"] <= 1e-12
    lines = out.read_text().splitlines()
    assert lines[0] == "point,re,im,abs" and len(lines) == 3
    assert all(float(row.rsplit(",", 1)[1]) < 1 for row in lines[1:])


def test_annulus_scan(run):
    res = run("annulus", "--r", "0.01,0.25,0.4")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0] == "r,d_a,d_A,gap,tail_bound,asserted,strict"
    assert len(lines) == 4
    assert lines[2].split(",")[5:] == ["1", "1"]
    assert lines[3].split(",")[5] == "0"


def test_annulus_grid(run):
    res = run("annulus", "--r", "grid:0.05:0.25:5")
    assert res.exit_code == 0 and len(res.output.strip().splitlines()) == 6


def test_annulus_witness(run):
    res = run("annulus", "--r", "0.1", "--witness")
    assert res.exit_code == 0
    cert = json.loads(res.output)
    assert cert["valid"] and cert["d_a"] <= cert["sin_theta"] < cert["d_A"]


@pytest.mark.parametrize("args", [("--r", "0.5", "--witness"), ("--r", "1.5"), ("--r", "grid:x")])
def test_annulus_errors(run, args):
    assert run("annulus", *args).exit_code == 2


def test_fuzz_pass_and_files(run, tmp_path):
    out, csv = tmp_path / "rep.json", tmp_path / "rep.csv"
    res = run("fuzz", "schwarz-pick", "--domain", POLYDISC, "--samples", "20", "--seed", "3",
              "--out", str(out), "--csv", str(csv))
    assert res.exit_code == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["samples"] == 20
    assert len(csv.read_text().splitlines()) == 21


def test_fuzz_violation_exit_1(run):
    res = run("fuzz", "metric", "--domain", POLYDISC, "--samples", "5", "--tol", "-1")
    # the metric sweep has its own fixed tolerance, so it still passes
    assert res.exit_code == 0
    res = run("fuzz", "schwarz-pick", "--domain", POLYDISC, "--samples", "5", "--tol", "-1")
    assert res.exit_code == 1


@pytest.mark.parametrize("kind, extra", [
    ("schwarz-pick", ("--domain", ANNULUS, "--mode", "mixed")),
    ("von-neumann", ("--domain", POLYDISC)),
    ("metric", ("--domain", ANNULUS)),
    ("polyball", ("--dims", "2,1", "--polys", "3", "--sup-points", "128")),
])
def test_fuzz_byte_identical(run, kind, extra):
    args = ("fuzz", kind, "--samples", "6", "--seed", "123", *extra)
    a, b = run(*args), run(*args)
    assert a.exit_code == 0
    assert a.output == b.output


def test_fuzz_timing_flag(run):
    res = run("fuzz", "metric", "--domain", POLYDISC, "--samples", "3", "--timing")
    assert "wall_time" in json.loads(res.output)["metadata"]


def test_fuzz_errors(run):
    assert run("fuzz", "metric", "--samples", "3").exit_code == 2
    assert run("fuzz", "metric", "--domain", POLYDISC, "--samples", "0").exit_code == 2
    assert run("fuzz", "polyball", "--dims", "a,b").exit_code == 2


def test_bound(run):
    res = run("bound", "--domain", POLYDISC, "--samples", "20")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["estimate"] <= 1 + 1e-9 and set(out["running_max"]) == {"5", "10", "20"}
