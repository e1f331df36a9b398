"""Command-line interface: outputs, reproducibility, exit codes."""

import json
import math

import numpy as np
import pytest

from dipolepair.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main


def write_config(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def run(*args):
    return main(list(args))


class TestRates:
    def test_writes_expected_schema(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.05, 0.5, 2.0], "theta": math.pi / 2,
        })
        assert run("rates", "--config", cfg, "--out", str(tmp_path)) == EXIT_OK
        lines = (tmp_path / "rates.csv").read_text().splitlines()
        assert lines[0] == "kr,gamma12_over_gamma,lambda12_over_gamma"
        assert len(lines) == 4
        first = [float(v) for v in lines[1].split(",")]
        # small separation: decay overlap near 1, shift large in magnitude
        assert first[1] > 0.99
        assert abs(first[2]) > 1e3

    def test_validation_before_any_write(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"kr": [0.5, 1e-4]})
        assert run("rates", "--config", cfg, "--out", str(tmp_path)) == EXIT_VALIDATION
        assert not (tmp_path / "rates.csv").exists()
        assert list(tmp_path.glob(".tmp-*")) == []

    def test_missing_output_dir(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"kr": [0.5]})
        missing = str(tmp_path / "nope")
        code = run("rates", "--config", cfg, "--out", missing)
        assert code == EXIT_IO

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {"kr": [0.3, 0.7, 1.9]})
        run("rates", "--config", cfg, "--out", str(tmp_path))
        first = (tmp_path / "rates.csv").read_bytes()
        run("rates", "--config", cfg, "--out", str(tmp_path))
        assert (tmp_path / "rates.csv").read_bytes() == first

    def test_unknown_preset(self, tmp_path):
        assert run("rates", "--preset", "fig99", "--out", str(tmp_path)) == EXIT_VALIDATION


class TestSimulate:
    def test_symmetric_run_with_cross_check(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.5], "target": "s", "time": {"samples": 301},
        })
        assert run("simulate", "--config", cfg, "--out", str(tmp_path)) == EXIT_OK
        path = tmp_path / "trajectory_kr0.5.csv"
        lines = path.read_text().splitlines()
        assert lines[0] == "t,P_gg,P_s,P_a,P_ee,P_atom1,P_atom2,re_coh_sa,im_coh_sa"
        data = np.loadtxt(lines[1:], delimiter=",")
        assert abs(data[:, 2].max() - 1.0) < 1e-3   # P_s column peaks at 1
        assert data[:, 4].max() < 1e-10             # no double excitation

    def test_workers_match_serial(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.5, 1.0], "target": "s", "time": {"samples": 201},
        })
        run("simulate", "--config", cfg, "--out", str(tmp_path))
        serial = (tmp_path / "trajectory_kr1.csv").read_bytes()
        run("simulate", "--config", cfg, "--out", str(tmp_path), "--workers", "2")
        assert (tmp_path / "trajectory_kr1.csv").read_bytes() == serial

    def test_coherent_field_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.5], "field": {"statistics": "coherent"},
        })
        assert run("simulate", "--config", cfg, "--out", str(tmp_path)) == EXIT_VALIDATION


class TestDecay:
    def test_decay_curves(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [1.0], "initial": ["s"], "time": {"t_end": 4.0, "samples": 101},
        })
        assert run("decay", "--config", cfg, "--out", str(tmp_path)) == EXIT_OK
        data = np.loadtxt(
            (tmp_path / "decay_s_kr1.csv").read_text().splitlines()[1:], delimiter=","
        )
        assert data[0, 2] == pytest.approx(1.0)
        assert np.all(np.diff(data[:, 2]) < 0)


class TestCoherent:
    def test_sweep_schema(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.5], "target": "s", "alpha": 1.0, "time": {"samples": 201},
        })
        assert run("coherent", "--config", cfg, "--out", str(tmp_path)) == EXIT_OK
        lines = (tmp_path / "coherent_sweep.csv").read_text().splitlines()
        assert lines[0] == "kr,maxPs,Pee,Pa,Pgg"
        row = [float(v) for v in lines[1].split(",")]
        assert row[1] < 0.95
        assert sum(row[1:]) == pytest.approx(1.0, abs=1e-6)


class TestOptimize:
    def test_scan_and_summary(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", {
            "kr": 0.5, "family": "rising_exponential", "target": "s",
            "bounds": [1.0, 4.0], "budget": 24, "scan_points": 7,
        })
        assert run("optimize", "--config", cfg, "--out", str(tmp_path)) == EXIT_OK
        out = capsys.readouterr().out
        assert "optimum: bandwidth" in out
        lines = (tmp_path / "scan_rising_exponential_s.csv").read_text().splitlines()
        assert lines[0] == "bandwidth,peak"
        assert len(lines) == 8

    def test_multiple_kr_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", {
            "kr": [0.5, 1.0], "family": "square", "bounds": [0.5, 2.0],
        })
        assert run("optimize", "--config", cfg, "--out", str(tmp_path)) == EXIT_VALIDATION


def test_no_config_is_validation_error(tmp_path):
    assert run("rates", "--out", str(tmp_path)) == EXIT_VALIDATION


def test_presets_ship_with_package():
    from importlib import resources

    names = {p.name for p in resources.files("dipolepair").joinpath("presets").iterdir()}
    for fig in ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
                "opt_rising", "opt_square", "opt_gaussian"):
        assert f"{fig}.json" in names
