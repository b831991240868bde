import math
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from fh_app.cli import cli, main
from fh_app.error_handlers import NumericalException


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def toy_files(tmp_path):
    registry = tmp_path / "toy.csv"
    registry.write_text("name,De,te,mu,t0,q\ntoy,1,1,1,1,-0.5\n")
    config = tmp_path / "toy.env"
    config.write_text("FH_HBAR_EV_NS=0.1\nFH_AMU_TO_EV_PER_C2=1\n")
    return ["--registry", str(registry), "--config", str(config), "--alpha", "1"]


# --- Registry & potential ---
def test_molecules(runner):
    result = runner.invoke(cli, ["molecules"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "name,De,te,mu,t0,q"
    assert [line.split(",")[0] for line in lines[1:]] == ["CO", "N2", "H2", "LiH"]


def test_potential(runner):
    result = runner.invoke(cli, ["potential", "H2", "--t", "5.0", "--t", "0.7416"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "t,V"
    t, V = lines[1].split(",")
    assert t == "5"
    assert float(V) == pytest.approx(4.5694, rel=1e-3)
    assert abs(float(lines[2].split(",")[1])) < 1e-9


def test_unknown_molecule(runner):
    result = runner.invoke(cli, ["spectrum", "HCl"])
    assert result.exit_code == 1
    assert "error: Molecule 'HCl' not found" in result.output


# --- Spectrum ---
def test_spectrum_h2(runner):
    result = runner.invoke(cli, ["spectrum", "H2", "--levels", "3"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "n,cPn,Pn"
    rows = [line.split(",") for line in lines[1:]]
    assert [row[0] for row in rows] == ["0", "1", "2"]
    assert all(float(Pn) == -float(cPn) for _, cPn, Pn in rows)


def test_spectrum_compare(runner):
    result = runner.invoke(cli, ["spectrum", "H2", "--levels", "2", "--compare"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "n,AsPrintedEq22,BetaTimesA,QuantizationRoot"
    assert len(lines) == 3


def test_spectrum_lists_excluded_levels(runner, toy_files):
    result = runner.invoke(cli, [*toy_files, "spectrum", "toy", "--levels", "12"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 13
    assert lines[-3:] == ["9,excluded,excluded", "10,excluded,excluded", "11,excluded,excluded"]


def test_numerical_failure_exit_code(runner):
    with patch("fh_app.cli.spectrum", side_effect=NumericalException("no convergence")):
        result = runner.invoke(cli, ["spectrum", "H2"])
    assert result.exit_code == 2
    assert "error: no convergence" in result.output


def test_main_usage_error():
    assert main(["spectrum"]) == 1
    assert main(["molecules"]) == 0


# --- Wavefunction ---
def test_wavefunction(runner):
    result = runner.invoke(
        cli, ["wavefunction", "--n", "0", "--zeta1", "1", "--R", "1", "--points", "3"]
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "s,psi"
    s, psi = lines[2].split(",")
    assert float(s) == 0.5
    assert float(psi) == pytest.approx(math.sqrt(30) / 4, rel=1e-10)


def test_wavefunction_rejects_bad_radius():
    assert main(["wavefunction", "--zeta1", "1", "--R", "0"]) == 1


# --- Reports ---
def test_scan_is_reproducible(runner, tmp_path):
    args = ["scan", "--kind", "PnVsN", "--molecule", "H2", "--start", "0", "--stop", "4"]
    first = runner.invoke(cli, ["--out", str(tmp_path / "a"), *args, "--steps", "5"])
    second = runner.invoke(cli, ["--out", str(tmp_path / "b"), *args, "--steps", "5"])
    assert first.exit_code == 0 and second.exit_code == 0
    assert "5 rows (0 excluded)" in first.output.splitlines()
    a, b = tmp_path / "a" / "scan.csv", tmp_path / "b" / "scan.csv"
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a" / "scan.svg").exists()


def test_scan_compare_variants(runner, tmp_path, toy_files):
    result = runner.invoke(
        cli,
        [
            *toy_files,
            "--out",
            str(tmp_path),
            "scan",
            "--kind",
            "PnVsN",
            "--start",
            "0",
            "--stop",
            "11",
            "--steps",
            "12",
            "--compare",
        ],
    )
    assert result.exit_code == 0
    header, *rows = (tmp_path / "scan.csv").read_text().splitlines()
    assert len(rows) == 36
    assert {row.split(",")[3] for row in rows} == {
        "AsPrintedEq22",
        "BetaTimesA",
        "QuantizationRoot",
    }
    assert "11,toy,11,QuantizationRoot,excluded" in rows


def test_validate(runner, tmp_path):
    result = runner.invoke(
        cli, ["--out", str(tmp_path), "validate", "--molecule", "H2", "--levels", "2"]
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert any(line.startswith("box self-test deviation") for line in lines)
    rows = [line for line in lines if line.startswith("H2 n=")]
    assert len(rows) == 2
    assert all(line.endswith(" ok") for line in rows)
    assert (tmp_path / "validation.csv").exists()
    assert (tmp_path / "validation_ledger.csv").exists()
