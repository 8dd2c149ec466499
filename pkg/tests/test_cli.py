import json

import numpy as np
import pandas as pd
import pytest

from geomech.data.grid_io import write_section_csv
from geomech.estimator.base_estimator import run_or_exit
from geomech.estimator.check_estimator import CheckEstimator
from geomech.estimator.derivation_estimator import DerivationEstimator
from geomech.estimator.hamiltonize_estimator import HamiltonizeEstimator
from geomech.estimator.integration_estimator import IntegrationEstimator
from geomech.estimator.residual_estimator import ResidualEstimator
from geomech.field.residual import PhaseSection


def _exit_code(action):
    with pytest.raises(SystemExit) as err:
        run_or_exit(action)
    return err.value.code


def _saddle_csv(path, n):
    spacing = 1.0 / (n - 1)
    section = PhaseSection.sample([0.0, 0.0], [spacing, spacing], (n, n), lambda x1, x2: [x1 ** 2 - x2 ** 2])
    return write_section_csv(section, path)


class TestDerive:
    def test_oscillator(self, make_cfg, capsys):
        run_or_exit(DerivationEstimator(make_cfg("derive", ["model=harmonic_oscillator"])).derive)
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "# phase dynamics"
        assert "p_q - v_q = 0" in out
        assert "qddot + q = 0" in out
        assert "p_q = v_q" in out

    def test_latex(self, make_cfg, capsys):
        run_or_exit(DerivationEstimator(make_cfg("derive", ["model=harmonic_oscillator", "format=latex"])).derive)
        assert "\\ddot{q} + q = 0" in capsys.readouterr().out

    def test_malformed_model_file(self, make_cfg, model_files, capsys):
        cfg = make_cfg("derive", [f"model_file='{model_files / 'malformed.toml'}'"])
        assert _exit_code(lambda: DerivationEstimator(cfg)) == 2
        assert "line 5" in capsys.readouterr().err

    def test_no_model(self, make_cfg, capsys):
        assert _exit_code(lambda: DerivationEstimator(make_cfg("derive"))) == 2
        assert "no model selected" in capsys.readouterr().err

    def test_unknown_model(self, make_cfg):
        assert _exit_code(lambda: DerivationEstimator(make_cfg("derive", ["model=pendulum3d"]))) == 2

    def test_unknown_format(self, make_cfg, capsys):
        cfg = make_cfg("derive", ["model=harmonic_oscillator", "format=rst"])
        assert _exit_code(DerivationEstimator(cfg).derive) == 2
        assert "Unknown format rst" in capsys.readouterr().err

    def test_bad_newton_tolerance(self, make_cfg):
        cfg = make_cfg("derive", ["model=harmonic_oscillator", "newton.tol=0"])
        assert _exit_code(lambda: DerivationEstimator(cfg)) == 2


class TestIntegrate:
    def test_oscillator(self, make_cfg, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        cfg = make_cfg("integrate", ["model=harmonic_oscillator", "z0=[1,0]", f"out='{out}'"])
        trajectory = run_or_exit(IntegrationEstimator(cfg).integrate)
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "steps: 629"
        assert lines[1].startswith("final: t=6.2832, q=")
        assert any(line.startswith("energy drift: ") for line in lines)
        x, p = trajectory.states[-1]
        assert abs(x - 1.0) <= 1e-5 and abs(p) <= 1e-4
        assert len(pd.read_csv(out)) == 630

    def test_model_file_and_string_state(self, make_cfg, model_files, tmp_path):
        cfg = make_cfg("integrate", [f"model_file='{model_files / 'harmonic_oscillator.toml'}'", "z0='1,0'",
                                     "t1=1.0", "h=0.1", f"out='{tmp_path / 'traj.csv'}'"])
        trajectory = run_or_exit(IntegrationEstimator(cfg).integrate)
        np.testing.assert_allclose(trajectory.states[0], [1.0, 0.0])

    def test_inconsistent_initial_data(self, make_cfg, tmp_path, capsys):
        cfg = make_cfg("integrate", ["model=singular_two_velocity", "z0=[1,0,1,0]", f"out='{tmp_path / 't.csv'}'"])
        assert _exit_code(IntegrationEstimator(cfg).integrate) == 3
        assert "inconsistent initial data" in capsys.readouterr().err

    def test_state_size(self, make_cfg, tmp_path):
        cfg = make_cfg("integrate", ["model=harmonic_oscillator", "z0=[1,0,0]", f"out='{tmp_path / 't.csv'}'"])
        assert _exit_code(IntegrationEstimator(cfg).integrate) == 4

    def test_missing_state(self, make_cfg):
        assert _exit_code(IntegrationEstimator(make_cfg("integrate", ["model=harmonic_oscillator"])).integrate) == 4

    def test_field_model_is_rejected(self, make_cfg):
        assert _exit_code(lambda: IntegrationEstimator(make_cfg("integrate", ["model=scalar_flat2"]))) == 2

    @pytest.mark.parametrize("override", ["source=symplectic", "h=0", "t1=0"])
    def test_bad_options(self, make_cfg, tmp_path, override):
        cfg = make_cfg("integrate", ["model=harmonic_oscillator", "z0=[1,0]", f"out='{tmp_path / 't.csv'}'", override])
        assert _exit_code(IntegrationEstimator(cfg).integrate) == 2


class TestResidual:
    def test_harmonic_data(self, make_cfg, model_files, tmp_path, capsys):
        data = _saddle_csv(tmp_path / "saddle.csv", 17)
        cfg = make_cfg("residual", [f"model_file='{model_files / 'scalar_flat2.toml'}'", f"field_data='{data}'",
                                    f"out='{tmp_path / 'residual.csv'}'"])
        report = run_or_exit(ResidualEstimator(cfg).residual)
        assert report.max_abs <= 1e-10
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "# el residual"
        assert "y_d1d1 + y_d2d2 = 0" in out
        assert len(pd.read_csv(tmp_path / "residual.csv")) == 13 * 13

    def test_grid_must_match_the_model_file(self, make_cfg, model_files, tmp_path):
        data = _saddle_csv(tmp_path / "small.csv", 9)
        cfg = make_cfg("residual", [f"model_file='{model_files / 'scalar_flat2.toml'}'", f"field_data='{data}'"])
        assert _exit_code(ResidualEstimator(cfg).residual) == 4

    def test_missing_data(self, make_cfg):
        assert _exit_code(ResidualEstimator(make_cfg("residual", ["model=scalar_flat2"])).residual) == 2

    def test_unknown_residual_kind(self, make_cfg, tmp_path, capsys):
        data = _saddle_csv(tmp_path / "saddle.csv", 17)
        cfg = make_cfg("residual", ["model=scalar_flat2", f"field_data='{data}'", "which=weak"])
        assert _exit_code(ResidualEstimator(cfg).residual) == 2
        assert "Unknown residual kind weak" in capsys.readouterr().err


class TestHamiltonize:
    def test_oscillator(self, make_cfg, capsys):
        run_or_exit(HamiltonizeEstimator(make_cfg("hamiltonize", ["model=harmonic_oscillator"])).hamiltonize)
        assert capsys.readouterr().out.splitlines() == ["H = 0.5*p_q^2 + 0.5*q^2"]

    def test_singular_mechanics(self, make_cfg, capsys):
        run_or_exit(HamiltonizeEstimator(make_cfg("hamiltonize", ["model=singular_two_velocity"])).hamiltonize)
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("generating family: ")
        assert "constraint: p_q1 + p_q2 = 0" in out

    def test_electromagnetism(self, make_cfg, capsys):
        run_or_exit(HamiltonizeEstimator(make_cfg("hamiltonize", ["model=em2"])).hamiltonize)
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "jet Hessian rank: 1"
        assert "constraint: p1_A2 + p2_A1 = 0" in out


class TestCheck:
    def test_bundles(self, make_cfg, tmp_path, capsys):
        path = tmp_path / "report.json"
        cfg = make_cfg("check", ["suite=bundles", "trials=5", f"report='{path}'"])
        report = run_or_exit(CheckEstimator(cfg).check)
        assert report.passed
        lines = capsys.readouterr().out.splitlines()
        assert lines[-2] == "PASS"
        payload = json.loads(path.read_text())
        assert payload["schema_version"] == 1
        assert list(payload["suites"]) == ["bundles"]

    def test_unknown_suite(self, make_cfg, tmp_path, capsys):
        cfg = make_cfg("check", ["suite=optics", f"report='{tmp_path / 'report.json'}'"])
        assert _exit_code(CheckEstimator(cfg).check) == 2
        assert "Unknown suite optics" in capsys.readouterr().err
