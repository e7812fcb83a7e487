import pytest

from clinrisk.harness import store
from clinrisk.harness.cli import EXIT_OK, main


@pytest.mark.slow
def test_csv_pipeline(tmp_path, capsys):
    splits = tmp_path / "splits"
    assert main(["generate", "--out", str(splits), "--seed", "5"]) == EXIT_OK
    noisy = splits / "train_noisy.csv"
    args = ["inject-noise", "--in", str(splits / "train.csv"), "--out", str(noisy)]
    assert main([*args, "--rate", "0.2", "--seed", "5"]) == EXIT_OK

    config = tmp_path / "csv.toml"
    config.write_text(
        'method = "gmm_filter"\n'
        "epochs = 6\n"
        "warmup_epochs = 3\n"
        "[data]\n"
        'kind = "csv"\n'
        f'train = "{noisy}"\n'
        f'val = "{splits / "val.csv"}"\n'
        f'test = "{splits / "test.csv"}"\n'
        "[matrix]\n"
        'methods = ["gmm_filter", "gmm_filter+cs"]\n'
        "noise_rates = [0.0]\n"
        "seeds = [0, 1]\n"
    )
    results = tmp_path / "results.jsonl"
    assert main(["matrix", "--config", str(config), "--out", str(results)]) == EXIT_OK
    loaded = store.load(results)
    assert len(loaded) == 4
    # the dumped true_label column keeps selection quality measurable
    assert all(r.ok and r.selection is not None for r in loaded)

    capsys.readouterr()
    assert main(["report", "--in", str(results)]) == EXIT_OK
    table = capsys.readouterr().out
    assert "gmm_filter+CS" in table

    tradeoff = tmp_path / "tradeoff.csv"
    args = ["report", "--in", str(results), "--kind", "tradeoff", "--out", str(tradeoff)]
    assert main(args) == EXIT_OK
    assert len(tradeoff.read_text().splitlines()) == 3
    assert tradeoff.with_suffix(".svg").exists()
