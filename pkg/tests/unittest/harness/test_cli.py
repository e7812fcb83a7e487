import json

import pandas as pd
import pytest
import typer

from clinrisk.harness import store
from clinrisk.harness.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, app, click_exceptions, main

TINY = """
method = "baseline"
epochs = 2
warmup_epochs = 0
batch_size = 32
hidden_sizes = [8]
{extra}

[data]
n_train = 120
n_val = 40
n_test = 40
feature_dim = 4
{data}
"""


@pytest.fixture
def write_config(tmp_path):
    def _write(extra="", data=""):
        path = tmp_path / "config.toml"
        path.write_text(TINY.format(extra=extra, data=data))
        return path

    return _write


class TestUsage:
    def test_unknown_flag(self, tmp_path):
        assert main(["run", "--bogus"]) == EXIT_CONFIG

    def test_missing_option(self):
        assert main(["run"]) == EXIT_CONFIG

    def test_bad_report_kind(self, tmp_path):
        assert main(["report", "--in", str(tmp_path / "r.jsonl"), "--kind", "pie"]) == 1

    def test_usage_printed(self, capsys):
        assert main(["matrix", "--bogus"]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "No such option" in err
        assert "Usage:" in err

    def test_exceptions_match_command(self):
        command = typer.main.get_command(app)
        errors = click_exceptions(command)
        assert issubclass(errors.NoSuchOption, errors.UsageError)
        with pytest.raises(errors.UsageError):
            command.main(args=["run", "--bogus"], standalone_mode=False)

    def test_exceptions_need_a_command(self):
        with pytest.raises(TypeError):
            click_exceptions(object())

    def test_unknown_config_key(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text("epoch = 3\n")
        assert main(["run", "--config", str(path), "--out", str(tmp_path / "r.jsonl")]) == 1
        assert "epoch not a valid key" in capsys.readouterr().err


class TestRun:
    def test_success(self, write_config, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        code = main(["run", "--config", str(write_config()), "--out", str(out)])
        assert code == EXIT_OK
        assert len(out.read_text().splitlines()) == 1
        assert "finished: bac=" in capsys.readouterr().out

    def test_seed_override(self, write_config, tmp_path):
        out = tmp_path / "r.jsonl"
        main(["run", "--config", str(write_config()), "--out", str(out), "--seed", "42"])
        assert json.loads(out.read_text())["config"]["seed"] == 42

    def test_invalid_seed(self, write_config, tmp_path):
        args = ["run", "--config", str(write_config()), "--out", str(tmp_path / "r.jsonl")]
        assert main([*args, "--seed", "-3"]) == EXIT_CONFIG

    def test_failed_run(self, write_config, tmp_path):
        out = tmp_path / "r.jsonl"
        config = write_config(data="positive_fraction = 0.01")
        assert main(["run", "--config", str(config), "--out", str(out)]) == EXIT_FAILURE
        assert json.loads(out.read_text())["status"] == "failed"


class TestMatrix:
    def test_writes_every_cell(self, write_config, tmp_path):
        config = write_config(extra="[matrix]\nnoise_rates = [0.0, 0.2]\nseeds = [0]")
        out = tmp_path / "m.jsonl"
        assert main(["matrix", "--config", str(config), "--out", str(out)]) == EXIT_OK
        assert len(store.load(out)) == 2

    def test_failing_cell(self, write_config, tmp_path):
        config = write_config(extra="[matrix]\nnoise_rates = [0.0, 2.0]\nseeds = [0]")
        out = tmp_path / "m.jsonl"
        code = main(["matrix", "--config", str(config), "--out", str(out), "--no-wall-clock"])
        assert code == EXIT_FAILURE
        results = store.load(out)
        assert sorted(r.status for r in results) == ["failed", "ok"]
        assert all(r.wall_clock_seconds is None for r in results)


class TestData:
    def test_generate_and_inject(self, tmp_path, capsys):
        out = tmp_path / "splits"
        assert main(["generate", "--out", str(out), "--preset", "path", "--seed", "3"]) == 0
        assert sorted(p.name for p in out.iterdir()) == ["test.csv", "train.csv", "val.csv"]
        train = pd.read_csv(out / "train.csv")
        assert len(train) == 4000
        noisy = tmp_path / "noisy.csv"
        code = main(
            ["inject-noise", "--in", str(out / "train.csv"), "--out", str(noisy), "--rate", "0.2"]
        )
        assert code == EXIT_OK
        assert "of 4000 labels" in capsys.readouterr().out
        assert pd.read_csv(noisy)["flip"].sum() > 0

    def test_unknown_preset(self, tmp_path):
        assert main(["generate", "--out", str(tmp_path), "--preset", "chest"]) == EXIT_CONFIG

    def test_invalid_rate(self, tmp_path):
        args = ["inject-noise", "--in", str(tmp_path / "t.csv"), "--out", str(tmp_path / "o")]
        assert main([*args, "--rate", "1.5"]) == EXIT_CONFIG

    def test_missing_input(self, tmp_path):
        args = ["inject-noise", "--in", str(tmp_path / "t.csv"), "--out", str(tmp_path / "o")]
        assert main([*args, "--rate", "0.5"]) == EXIT_FAILURE


class TestReport:
    @pytest.fixture
    def results_file(self, tmp_path, result_factory):
        path = tmp_path / "results.jsonl"
        store.persist(
            [
                result_factory(noise=0.0, counts=(278, 204, 1409, 114)),
                result_factory(noise=0.4, counts=(333, 910, 703, 59), collapse=True),
                result_factory(method="unicon", noise=0.4),
            ],
            path,
        )
        return path

    def test_table(self, results_file, capsys):
        assert main(["report", "--in", str(results_file)]) == EXIT_OK
        assert "Best values per column:" in capsys.readouterr().out

    def test_noise_impact_needs_one_method(self, results_file, capsys):
        args = ["report", "--in", str(results_file), "--kind", "noise-impact"]
        assert main(args) == EXIT_FAILURE
        assert main([*args, "--method", "baseline"]) == EXIT_OK
        assert "risk fell while collapse flagged" in capsys.readouterr().out

    def test_tradeoff_files(self, results_file, tmp_path):
        out = tmp_path / "tradeoff.csv"
        args = ["report", "--in", str(results_file), "--kind", "tradeoff", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert out.read_text().startswith("method,cs,noise,bac,risk,collapse_flag\n")
        assert out.with_suffix(".svg").read_text().lstrip().startswith("<?xml")

    @pytest.mark.parametrize("kind", ["sweep", "risk"])
    def test_other_kinds(self, results_file, kind):
        assert main(["report", "--in", str(results_file), "--kind", kind]) == EXIT_OK

    def test_unknown_method(self, results_file):
        args = ["report", "--in", str(results_file), "--method", "dividemix"]
        assert main(args) == EXIT_FAILURE

    def test_missing_file(self, tmp_path):
        assert main(["report", "--in", str(tmp_path / "none.jsonl")]) == EXIT_FAILURE

    def test_corrupt_file(self, tmp_path, capsys):
        path = tmp_path / "bad.jsonl"
        path.write_text("{not json\n")
        assert main(["report", "--in", str(path)]) == EXIT_FAILURE
        assert "line 1" in capsys.readouterr().err
