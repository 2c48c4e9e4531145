import json

import pytest
from click.testing import CliRunner

from slopegap import pipeline, verify
from slopegap.cli import USAGE_EXIT_CODE, cli
from slopegap.verify import CheckResult


@pytest.fixture
def runner():
    return CliRunner()


def test_analyze_torus(runner):
    result = runner.invoke(cli, ["-o", "torus", "analyze"])
    assert result.exit_code == 0, result.output
    report = json.loads(result.stdout)
    assert list(report) == ["origami", "index", "cusps", "components", "breakpoints", "covolume", "hall_signature"]
    assert report["origami"] == "(1)|(1)"
    assert report["index"] == 1
    assert report["breakpoints"] == ["1", "4"]
    assert report["hall_signature"]["closure_ok"] is True


def test_analyze_is_byte_stable(runner):
    first = runner.invoke(cli, ["-o", "(1,2)|(1,2,3)", "analyze"])
    second = runner.invoke(cli, ["-o", "three-tile", "analyze"])
    assert first.exit_code == 0
    assert first.stdout == second.stdout


def test_analyze_csv(runner):
    result = runner.invoke(cli, ["-o", "torus", "analyze", "--out", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "component,cusp_word,width,alpha_eff,b_lo,b_hi,winner_x,winner_y"
    assert lines[1:] == ["0,I,1,1,-1,0,1,1"]


def test_pdf_breakpoints(runner):
    result = runner.invoke(cli, ["-o", "torus", "pdf", "--breakpoints"])
    assert result.exit_code == 0
    assert result.stdout == "1\n4\n"


def test_pdf_csv(runner):
    result = runner.invoke(cli, ["-o", "torus", "pdf", "--samples", "4", "--tmax", "2", "--csv"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "t,pdf,cdf"
    assert len(lines) == 5
    assert lines[1] == "0.5,0,0"
    assert lines[4].startswith("2,0.34657359027997")


def test_pdf_pieces(runner):
    result = runner.invoke(cli, ["-o", "torus", "pdf", "--pieces"])
    assert result.exit_code == 0
    assert len(json.loads(result.stdout)) == 3


def test_histogram_csv(runner):
    result = runner.invoke(cli, ["-o", "torus", "histogram", "--bound", "40", "--bins", "10", "--tmax", "5", "--csv"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "bin_lo,bin_hi,density,pdf"
    assert len(lines) == 11


def test_orbit_dot(runner):
    result = runner.invoke(cli, ["-o", "three-tile", "orbit", "--dot"])
    assert result.exit_code == 0
    assert result.stdout.startswith("digraph orbit {")
    assert result.stdout.count("->") == 6


def test_orbit_json(runner):
    result = runner.invoke(cli, ["-o", "ten-tile", "orbit"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["index"] == 12
    assert sorted(c["width"] for c in data["cusps"]) == [1, 1, 5, 5]


def test_verify_passes_on_torus(runner):
    result = runner.invoke(cli, ["-o", "torus", "verify", "--csv"])
    assert result.exit_code == 0, result.output
    rows = result.stdout.splitlines()
    assert rows[0] == "check,status,metric,threshold"
    assert not any(",fail," in row or ",error," in row for row in rows)


def test_verify_failure_exits_one(runner, monkeypatch):
    monkeypatch.setitem(verify.CHECKS, "index", lambda ctx: CheckResult("index", "fail", 1.0, 0.0))
    result = runner.invoke(cli, ["-o", "torus", "verify"])
    assert result.exit_code == 1


@pytest.mark.parametrize(
    "args, code",
    [
        (["-o", "(1,2)|(3,4)", "analyze"], 3),
        (["-o", "(1,2", "analyze"], 2),
        (["-o", "(1,x)|(1)", "orbit"], 2),
        (["-o", "|", "analyze"], 2),
        (["-o", "ten-tile", "--orbit-cap", "2", "orbit"], 5),
    ],
)
def test_error_exit_codes(runner, args, code):
    result = runner.invoke(cli, args)
    assert result.exit_code == code
    assert result.stderr.startswith("error: ")


def test_unsupported_surface_exits_four(runner, monkeypatch):
    monkeypatch.setattr(pipeline, "contains_minus_identity", lambda o: False)
    result = runner.invoke(cli, ["-o", "torus", "analyze"])
    assert result.exit_code == 4


def test_origami_is_required(runner):
    result = runner.invoke(cli, ["analyze"])
    assert result.exit_code == USAGE_EXIT_CODE


@pytest.mark.parametrize(
    "args",
    [
        ["-o", "torus", "pdf", "--tmax", "0"],
        ["-o", "torus", "pdf", "--tmax=-3"],
        ["-o", "torus", "histogram", "--tmax", "0"],
        ["-o", "torus", "verify", "--no-such-flag"],
        ["-o", "torus", "frobnicate"],
    ],
)
def test_usage_errors_have_their_own_exit_code(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == USAGE_EXIT_CODE
    assert result.exit_code not in (0, 1, 2, 3, 4, 5, 6)
    assert not result.stdout
