import json

import pytest

from nilstrat.core.config import ENV_OVERRIDES, Settings, load_settings
from nilstrat.core.exceptions import ParseError
from nilstrat.main import run


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    for variable in list(ENV_OVERRIDES) + ["NILSTRAT_CONFIG"]:
        monkeypatch.delenv(variable, raising=False)
    monkeypatch.setenv("NILSTRAT_CONFIG", str(tmp_path / "missing.yaml"))


@pytest.fixture
def cli(capsys):
    def invoke(*argv):
        code = run(list(argv))
        out = capsys.readouterr().out
        return code, json.loads(out)

    return invoke


@pytest.fixture
def h3_path(fixture_dir):
    return str(fixture_dir / "heisenberg1.nilalg")


@pytest.fixture
def filiform_path(fixture_dir):
    return str(fixture_dir / "filiform4.nilalg")


class TestCommands:
    def test_generic(self, cli, h3_path):
        code, report = cli("generic", h3_path, "--mode", "symbolic", "--pfaffian")
        assert code == 0
        assert report["status"] == "ok"
        assert report["result"]["e"] == [2, 3]
        assert report["result"]["pfaffian"] == "u1"
        assert report["input_digest"].startswith("sha256:")
        assert "seed" not in report

    def test_sampled_mode_from_env_records_seed(self, cli, h3_path, monkeypatch):
        monkeypatch.setenv("NILSTRAT_GENERIC_MODE", "sampled")
        code, report = cli("generic", h3_path, "--samples", "20")
        assert code == 0
        assert report["result"]["mode"] == "sampled"
        assert report["result"]["e"] == [2, 3]
        assert report["seed"] == 0

    def test_auto_mode_above_threshold_records_seed(self, cli, h3_path, monkeypatch):
        monkeypatch.setenv("NILSTRAT_GENERIC_MODE", "auto")
        monkeypatch.setenv("NILSTRAT_SYMBOLIC_MAX_DIM", "2")
        code, report = cli("--seed", "5", "jumpset", h3_path, "--xi", "1,0,0")
        assert code == 0
        assert report["seed"] == 5

    def test_auto_mode_below_threshold_has_no_seed(self, cli, h3_path, monkeypatch):
        monkeypatch.setenv("NILSTRAT_GENERIC_MODE", "auto")
        code, report = cli("generic", h3_path)
        assert report["result"]["mode"] == "symbolic"
        assert "seed" not in report

    def test_info(self, cli, filiform_path):
        code, report = cli("info", filiform_path)
        assert code == 0
        assert report["result"]["flag"] == ["X1", "X2", "X4", "X3"]
        assert report["result"]["nilpotency_class"] == 3
        assert report["result"]["center_dim"] == 1
        assert report["result"]["stepwise_layers"] == 2

    def test_jumpset(self, cli, filiform_path):
        code, report = cli("jumpset", filiform_path, "--xi", "0,1,0,0")
        assert code == 0
        assert report["result"]["jump_set"] == [3, 4]
        assert report["result"]["compare_to_generic"] == "greater"

    def test_canonical(self, cli, filiform_path):
        code, report = cli("canonical", filiform_path, "--xi=1,-1,0,1/2")
        assert code == 0
        assert report["result"] == {"xi0": ["1", "0", "0", "0"], "certificate": [{"X4": "-1"}]}

    def test_member_outside_x(self, cli, filiform_path):
        code, report = cli("member", filiform_path, "--xi", "0,1,0,0")
        assert code == 1
        assert report["status"] == "check-failed"
        assert report["result"]["member"] is False
        assert report["result"]["jump_set"] == [3, 4]
        assert report["result"]["nested"] is True

    def test_constant(self, cli, filiform_path):
        code, report = cli("constant", filiform_path, "--via-stepwise", "--xi", "2,0,0,5")
        assert code == 0
        assert report["result"]["pfaffian_abs"] == "2"

    def test_constant_precondition(self, cli, filiform_path):
        code, report = cli("constant", filiform_path, "--via-stepwise", "--xi", "0,0,0,5")
        assert code == 1
        assert report["result"]["error"] == "PreconditionFailed"
        assert report["result"]["details"]["clause"] == "nonzero on z_1"

    def test_grad_and_concat(self, cli, filiform_path):
        assert cli("grad", filiform_path, "--xi", "2,0,3,5")[0] == 0
        code, report = cli("concat", filiform_path, "--xi", "1,0,0,0")
        assert code == 0
        assert report["result"]["ideal_part"] == [2, 3]
        assert report["result"]["quotient_part"] == []

    def test_stepwise_and_validate(self, cli, filiform_path):
        assert cli("stepwise", filiform_path)[0] == 0
        assert cli("validate", filiform_path)[0] == 0

    def test_selftest(self, cli, h3_path):
        code, report = cli("--seed", "3", "selftest", h3_path, "--trials", "5")
        assert code == 0
        assert report["seed"] == 3
        suites = {s["suite"]: s for s in report["result"]["suites"]}
        assert suites["main2"]["applicable"] is False
        assert report["result"]["passed"] is True

    def test_selftest_is_reproducible(self, cli, filiform_path):
        first = cli("--seed", "9", "selftest", filiform_path, "--trials", "4")
        second = cli("--seed", "9", "selftest", filiform_path, "--trials", "4")
        assert first == second

    def test_fixture(self, cli, tmp_path):
        target = tmp_path / "ut5.nilalg"
        code, report = cli("fixture", "upper_triangular", "--size", "5", "--output", str(target))
        assert code == 0
        assert report["result"]["dim"] == 10
        assert target.exists()
        assert cli("stepwise", str(target))[0] == 0


class TestInputErrors:
    def test_unknown_command(self, cli, h3_path):
        code, report = cli("frobnicate", h3_path)
        assert code == 2
        assert report["status"] == "input-error"

    def test_wrong_length(self, cli, h3_path):
        code, report = cli("jumpset", h3_path, "--xi", "1,2")
        assert code == 2
        assert report["result"]["error"] == "DimensionMismatch"

    def test_zero_samples_is_not_the_default(self, cli, h3_path):
        code, report = cli("generic", h3_path, "--mode", "sampled", "--samples", "0")
        assert code == 2
        assert report["result"]["error"] == "SampleBudgetExhausted"

    def test_bad_literal(self, cli, h3_path):
        assert cli("jumpset", h3_path, "--xi", "1,x,2")[0] == 2

    def test_missing_bundle(self, cli, tmp_path):
        code, report = cli("info", str(tmp_path / "absent.nilalg"))
        assert code == 2
        assert report["result"]["error"] == "ParseError"

    def test_stepwise_commands_need_layers(self, cli, tmp_path):
        target = tmp_path / "plain.nilalg"
        target.write_text("name: h3\ndim: 3\nbasis: [X1, X2, X3]\nbrackets:\n- {left: X2, right: X3, result: X1}\n")
        assert cli("member", str(target), "--xi", "1,0,0")[0] == 2

    def test_layer_one_is_rejected(self, cli, filiform_path):
        assert cli("grad", filiform_path, "--layer", "1", "--xi", "1,0,0,0")[0] == 2


class TestSettings:
    def test_defaults_without_file(self, tmp_path):
        settings = load_settings(tmp_path / "none.yaml")
        assert settings == Settings()

    def test_file_and_env_override(self, tmp_path, monkeypatch):
        path = tmp_path / "config.yaml"
        path.write_text("selftest:\n  trials: 3\ngeneric:\n  mode: sampled\nobservability:\n  logging:\n    level: debug\n")
        monkeypatch.setenv("NILSTRAT_TRIALS", "4")
        settings = load_settings(path)
        assert settings.selftest.trials == 4
        assert settings.generic.mode == "sampled"
        assert settings.log_level == "DEBUG"

    def test_bad_env_value(self, tmp_path, monkeypatch):
        monkeypatch.setenv("NILSTRAT_SEED", "seven")
        with pytest.raises(ParseError):
            load_settings(tmp_path / "none.yaml")
