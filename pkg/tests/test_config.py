"""Tests for specred.config and specred.errors."""
import logging
import os

import pytest

from specred.config import SolverConfig, resolve
from specred.errors import EvaluationAtPole, NotHermitianFeasible, SpecredError, UnknownLabel


class TestSolverConfig:
    def test_defaults(self):
        config = SolverConfig()
        assert config.backend == "float"
        assert not config.exact
        assert config.log_level_value == logging.INFO

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            SolverConfig(backend="symbolic")

    def test_tolerances_must_be_positive(self):
        with pytest.raises(ValueError):
            SolverConfig(tol_psd=0)

    def test_with_backend(self):
        config = SolverConfig(eps=1e-7).with_backend("exact")
        assert config.exact
        assert config.field().exact
        assert config.float_field().eps == 1e-7

    def test_rng_is_seeded(self):
        assert SolverConfig(seed=1).rng().integers(1000) == SolverConfig(seed=1).rng().integers(1000)

    def test_resolve(self):
        config = SolverConfig(seed=9)
        assert resolve(config) is config
        assert resolve(None).seed == 0

    def test_from_env_file(self, tmp_path, mocker):
        mocker.patch.dict(os.environ, {}, clear=True)
        env = tmp_path / ".env"
        env.write_text("SPECRED_BACKEND=exact\nSPECRED_SEED=5\nSPECRED_TOL_PSD=1e-6\nSPECRED_LOG=debug\n")
        config = SolverConfig.from_env(env)
        assert config.exact
        assert config.seed == 5
        assert config.tol_psd == 1e-6
        assert config.log_level_value == logging.DEBUG

    def test_environment_wins_over_file(self, tmp_path, mocker):
        mocker.patch.dict(os.environ, {"SPECRED_BACKEND": "float"}, clear=True)
        env = tmp_path / ".env"
        env.write_text("SPECRED_BACKEND=exact\n")
        assert not SolverConfig.from_env(env).exact

    def test_from_env_rejects_bad_backend(self, tmp_path, mocker):
        mocker.patch.dict(os.environ, {"SPECRED_BACKEND": "gpu"}, clear=True)
        with pytest.raises(ValueError):
            SolverConfig.from_env(tmp_path / "missing.env")


class TestErrors:
    def test_context_document(self):
        err = EvaluationAtPole("entry has a pole", entry=(0, 1), point=2.5)
        assert err.to_dict() == {
            "error": "EvaluationAtPole",
            "message": "entry has a pole",
            "context": {"entry": [0, 1], "point": 2.5},
        }

    def test_errors_are_value_errors(self):
        assert issubclass(SpecredError, ValueError)
        with pytest.raises(ValueError):
            raise UnknownLabel("no such vertex", label="x")

    def test_default_message_is_name(self):
        assert str(UnknownLabel()) == "UnknownLabel"

    def test_nonplain_context_is_stringified(self):
        err = EvaluationAtPole("pole", point=object())
        assert isinstance(err.to_dict()["context"]["point"], str)

    def test_feasibility_report_kept_on_error(self):
        err = NotHermitianFeasible("no", report={"feasible": False}, poles_real=False)
        assert err.report == {"feasible": False}
        assert err.to_dict()["context"] == {"poles_real": False}
