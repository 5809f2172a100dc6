import pytest

from hpc_sentry.config import PipelineConfig
from hpc_sentry.pipeline.cli import COMMANDS, EXIT_ERROR, EXIT_OK, build_parser, main, resolve_config
from hpc_sentry.targets import Scheme, SubversionVariant


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.yaml"
    PipelineConfig.model_validate({"scheme": "uov", "paths": {"work_dir": str(tmp_path / "work")}}).to_yaml(path)
    return path


def test_parser_knows_every_command() -> None:
    parser = build_parser()
    for name in COMMANDS:
        assert parser.parse_args([name]).cmd == name
    args = parser.parse_args(["report", "--checkpoint", "3", "--pair", "cycles", "l2-dcm"])
    assert args.checkpoint == 3
    assert args.pair == ["cycles", "l2-dcm"]
    with pytest.raises(SystemExit):
        parser.parse_args(["detect", "--variant", "backdoor"])
    with pytest.raises(SystemExit):
        parser.parse_args([])


def test_resolve_config_defaults(monkeypatch) -> None:
    monkeypatch.delenv("HPC_SENTRY_CONFIG", raising=False)
    config = resolve_config(build_parser().parse_args(["detect"]))
    assert config.model_dump() == PipelineConfig().model_dump()


def test_resolve_config_from_the_environment(monkeypatch, config_file) -> None:
    monkeypatch.setenv("HPC_SENTRY_CONFIG", str(config_file))
    config = resolve_config(build_parser().parse_args(["detect", "--variant", "sparam"]))
    assert config.scheme == Scheme.UOV
    assert config.variant == SubversionVariant.SPARAM


def test_command_line_overrides_the_file(monkeypatch, config_file) -> None:
    monkeypatch.setenv("HPC_SENTRY_CONFIG", "/does/not/exist.yaml")
    args = build_parser().parse_args(["detect", "--config", str(config_file), "--scheme", "hashtree"])
    assert resolve_config(args).scheme == Scheme.HASHTREE


def test_missing_config_is_an_error(tmp_path) -> None:
    assert main(["offline", "--config", str(tmp_path / "missing.yaml")]) == EXIT_ERROR


def test_stages_out_of_order_are_an_error(config_file) -> None:
    assert main(["train", "--config", str(config_file)]) == EXIT_ERROR
    assert main(["collect", "--config", str(config_file)]) == EXIT_ERROR
    assert main(["detect", "--config", str(config_file)]) == EXIT_ERROR


def test_report_without_artifacts(config_file, capsys) -> None:
    assert main(["report", "--config", str(config_file)]) == EXIT_OK
    assert capsys.readouterr().out == ""
