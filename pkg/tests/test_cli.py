"""Tests for the command line interface"""

import logging

import numpy as np
import pytest

from expand_nets.cli.cli_main import ExitCode, main
from expand_nets.data.data_model_io import load_model, read_manifest, save_model
from expand_nets.training.training_types import TrainReport
from expand_nets.utils.logger import logger
from expand_nets.zoo.zoo_smallnet import build_smallnet


SMOKE_TRAIN = ["--dataset", "synthetic", "--synthetic-size", "40", "--epochs", "1", "--batch-size", "8"]


@pytest.fixture(name="compact")
def fixture_compact(tmp_path):
    path = tmp_path / "compact.json"
    assert main(["build", "smallnet7", str(path), "--seed", "1"]) == ExitCode.SUCCESS
    return path


def test_build(compact):
    net = load_model(compact)
    assert net.describe() == build_smallnet(7, 10).describe()


def test_expand_without_flags_copies_bytes(compact, tmp_path):
    target = tmp_path / "copy.json"
    assert main(["expand", str(compact), str(target)]) == ExitCode.SUCCESS
    assert target.read_bytes() == compact.read_bytes()
    assert target.with_suffix(".bin").read_bytes() == compact.with_suffix(".bin").read_bytes()


def test_expand_without_flags_copies_manifest_given_by_stem(tmp_path):
    source = tmp_path / "trained"
    save_model(build_smallnet(7, 10, seed=2), source, {"method": "per-channel", "mean": [0.5] * 3, "std": [0.25] * 3})
    target = tmp_path / "copy.json"
    assert main(["expand", str(source), str(target)]) == ExitCode.SUCCESS
    assert target.read_bytes() == source.with_suffix(".json").read_bytes()
    assert target.with_suffix(".bin").read_bytes() == source.with_suffix(".bin").read_bytes()
    assert read_manifest(target)["preprocessing"]["method"] == "per-channel"


def test_expand_keeps_preprocessing(tmp_path):
    source = tmp_path / "trained.json"
    save_model(build_smallnet(7, 10, seed=2), source, {"method": "per-channel", "mean": [0.5] * 3, "std": [0.25] * 3})
    target = tmp_path / "expanded.json"
    assert main(["expand", str(source), str(target), "--cl"]) == ExitCode.SUCCESS
    assert read_manifest(target)["preprocessing"]["mean"] == [0.5] * 3


@pytest.mark.parametrize("flag", ["--table1-channels", "--keep-input-channels"])
def test_expand_from_architecture_id(tmp_path, flag):
    target = tmp_path / "expanded.json"
    assert main(["expand", "smallnet7", str(target), "--ck", "--fc", "--rate", "4", flag]) == 0
    manifest = read_manifest(target)
    assert manifest["expansion"]["variant"] == "CK+FC"
    assert manifest["expansion"]["keep_input_channels"] is True
    first = manifest["layers"][0]
    assert (first["in_channels"], first["out_channels"], first["kernel_size"]) == (3, 3, 3)


def test_expand_errors(tmp_path):
    assert main(["expand", "smallnet3", str(tmp_path / "x.json"), "--ck"]) == ExitCode.USAGE
    assert main(["expand", "smallnet7", str(tmp_path / "x.json"), "--ck", "--cl"]) == ExitCode.USAGE
    assert main(["expand", str(tmp_path / "missing.json"), str(tmp_path / "x.json"), "--fc"]) == ExitCode.DATA
    assert main(["expand"]) == ExitCode.USAGE
    assert main(["unknown"]) == ExitCode.USAGE


def test_compress_and_verify(compact, tmp_path, capsys):
    expanded, compressed = tmp_path / "expanded.json", tmp_path / "compressed.json"
    assert main(["expand", str(compact), str(expanded), "--cl", "--fc", "--rate", "2"]) == 0
    assert main(["compress", str(expanded), str(compressed)]) == 0
    assert load_model(compressed).describe() == load_model(compact).describe()
    assert compressed.with_suffix(".bin").stat().st_size < expanded.with_suffix(".bin").stat().st_size

    assert main(["verify", str(expanded), str(compressed), "--trials", "3", "--tol", "1e-4"]) == 0
    assert main(["verify", str(expanded), str(compressed), "--trials", "3", "--float64"]) == 0
    capsys.readouterr()
    assert main(["verify", str(compact), str(compact), "--trials", "2"]) == 0
    assert "max abs diff 0.000e+00" in capsys.readouterr().out


def test_verify_failures(compact, tmp_path):
    other = tmp_path / "other.json"
    main(["build", "smallnet7", str(other), "--seed", "2"])
    assert main(["verify", str(compact), str(other), "--trials", "2"]) == ExitCode.VERIFICATION
    assert main(["verify", str(compact), "smallnet7-c100", "--trials", "1"]) == ExitCode.DATA


def test_compress_requires_units(compact, tmp_path):
    assert main(["compress", str(compact), str(tmp_path / "c.json")]) == ExitCode.DATA


def test_train_smoke_run_is_deterministic(tmp_path):
    reports = []
    for name in ("a", "b"):
        report = tmp_path / f"{name}.jsonl"
        assert main(["train", "smallnet3", str(tmp_path / f"{name}.json"), *SMOKE_TRAIN, "--report", str(report)]) == 0
        reports.append(TrainReport.from_jsonl(report.read_text()))
    assert len(reports[0].records) == 1
    assert reports[0].deterministic_view() == reports[1].deterministic_view()
    assert reports[0].run["config"]["lr_milestones"] == []
    manifest = read_manifest(tmp_path / "a.json")
    assert manifest["preprocessing"]["method"].startswith("per-channel")


def test_train_from_counterpart(tmp_path):
    expanded = tmp_path / "expanded.json"
    assert main(["expand", "smallnet3", str(expanded), "--cl", "--rate", "1"]) == 0
    report = tmp_path / "run.jsonl"
    assert main(["train", str(expanded), str(tmp_path / "trained.json"), *SMOKE_TRAIN, "--init-from-counterpart",
                 "--counterpart-slope", "0.1", "--report", str(report)]) == 0
    assert (tmp_path / "run.counterpart.jsonl").is_file()
    assert TrainReport.from_jsonl(report.read_text()).run["init_from_counterpart"] is True
    assert main(["compress", str(tmp_path / "trained.json"), str(tmp_path / "compact.json")]) == 0


def test_train_missing_dataset(tmp_path, monkeypatch):
    monkeypatch.delenv("EXPANDNET_DATA_DIR", raising=False)
    out = str(tmp_path / "m.json")
    assert main(["train", "smallnet3", out, "--epochs", "1"]) == ExitCode.DATA
    assert main(["train", "smallnet3", out, "--epochs", "1", "--data-dir", str(tmp_path / "nowhere")]) == ExitCode.DATA
    monkeypatch.setenv("EXPANDNET_DATA_DIR", str(tmp_path / "nowhere"))
    assert main(["eval", "smallnet3"]) == ExitCode.DATA
    assert main(["eval", "smallnet3", "--dataset", "cifar100"]) == ExitCode.USAGE


def test_eval_expanded_and_compressed_agree(tmp_path, capsys):
    expanded, compressed = tmp_path / "expanded.json", tmp_path / "compressed.json"
    main(["expand", "smallnet5", str(expanded), "--ck", "--fc", "--rate", "2"])
    main(["compress", str(expanded), str(compressed)])
    capsys.readouterr()
    assert main(["eval", str(expanded), "--dataset", "synthetic", "--synthetic-size", "100"]) == 0
    first = capsys.readouterr().out
    assert main(["eval", str(compressed), "--dataset", "synthetic", "--synthetic-size", "100"]) == 0
    second = capsys.readouterr().out
    assert first.startswith("top-1 accuracy")
    accuracy = float(first.split()[2])
    assert 0.0 <= accuracy <= 1.0
    assert np.isclose(accuracy, float(second.split()[2]))


def test_log_level_changes_only_with_verbosity_flags(tmp_path):
    previous = logger().level
    try:
        logger().setLevel(logging.WARNING)
        assert main(["build", "smallnet5", str(tmp_path / "a.json")]) == ExitCode.SUCCESS
        assert logger().level == logging.WARNING
        assert main(["--verbose", "build", "smallnet5", str(tmp_path / "b.json")]) == ExitCode.SUCCESS
        assert logger().level == logging.DEBUG
        assert main(["--quiet", "build", "smallnet5", str(tmp_path / "c.json")]) == ExitCode.SUCCESS
        assert logger().level == logging.WARNING
    finally:
        logger().setLevel(previous)
