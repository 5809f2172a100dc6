import pytest
from pydantic import ValidationError

from hpc_sentry.config import PipelineConfig, default_initial_inputs, load_config
from hpc_sentry.exceptions import ConfigurationError
from hpc_sentry.features import SelectionMethod
from hpc_sentry.targets import Scheme, SubversionVariant


def test_defaults() -> None:
    config = PipelineConfig()
    assert config.scheme == Scheme.LATTICE
    assert config.variant == SubversionVariant.TRUSTED
    assert (config.sampling.t_m, config.sampling.t_s) == (800_000, 20)
    assert (config.features.t_len, config.features.t_shift, config.features.z) == (20_000, 2_000, 4)
    assert config.features.selection_method == SelectionMethod.PCA
    assert (config.detector.t_ts, config.detector.t_pc, config.detector.folds) == (41, 31, 3)
    assert config.detector.gammas == [0.01, 0.001, 0.0001]
    assert config.detector.nus == [0.1, 0.2, 0.3, 0.4]
    assert [len(d) for d in config.fuzz.inputs] == [64] * 4
    assert len(set(default_initial_inputs())) == 4
    assert config.matrix.schemes == list(Scheme)


def test_digest_ignores_paths_variant_and_matrix() -> None:
    config = PipelineConfig()
    moved = PipelineConfig.model_validate(
        {"variant": "hash", "paths": {"work_dir": "/elsewhere"}, "matrix": {"workers": 4}}
    )
    assert moved.digest() == config.digest()
    assert PipelineConfig.model_validate({"fuzz": {"rng_seed": 1}}).digest() != config.digest()
    assert config.for_cell("uov").digest() != config.digest()


def test_for_cell() -> None:
    cell = PipelineConfig().for_cell("hashtree", "sparam")
    assert cell.scheme == Scheme.HASHTREE
    assert cell.variant == SubversionVariant.SPARAM


def test_paths() -> None:
    config = PipelineConfig.model_validate({"paths": {"work_dir": "out"}})
    assert str(config.paths.scheme_dir("uov")) == "out/uov/fuzzed"
    assert str(config.paths.scheme_dir("uov", "random")) == "out/uov/random"
    assert str(config.paths.matrix_dir) == "out/matrix"


@pytest.mark.parametrize(
    "payload",
    [
        {"features": {"selection_method": "fisher"}},
        {"features": {"threshold": 1.0}},
        {"features": {"t_len": 100, "t_shift": 200}},
        {"features": {"z": 9}},
        {"features": {"max_seeds": 2}},
        {"detector": {"t_ts": 40}},
        {"detector": {"gammas": []}},
        {"detector": {"gammas": [-1.0]}},
        {"detector": {"nus": [1.5]}},
        {"detector": {"folds": 1}},
        {"fuzz": {"budget_execs": 2}},
        {"fuzz": {"initial_inputs": ["zz"]}},
        {"fuzz": {"initial_inputs": [""]}},
        {"fuzz": {"initial_inputs": []}},
        {"sampling": {"t_m": 10, "t_s": 20}},
        {"sampling": {"t_m": 1000}},
        {"sampling": {"t_s": 500}},
        {"matrix": {"thresholds_pc": [31, 30]}},
        {"matrix": {"workers": 0}},
        {"scheme": "rsa"},
        {"variant": "backdoor"},
    ],
)
def test_invalid_configurations(payload) -> None:
    with pytest.raises(ValidationError):
        PipelineConfig.model_validate(payload)


def test_threshold_with_a_variance_method() -> None:
    config = PipelineConfig.model_validate({"features": {"selection_method": "max_std", "threshold": 2.5}})
    assert config.features.threshold == 2.5


def test_yaml_file(tmp_path) -> None:
    config = PipelineConfig.model_validate({"scheme": "uov", "fuzz": {"budget_execs": 50}})
    path = tmp_path / "run.yaml"
    text = config.to_yaml(path)
    assert path.read_text() == text
    assert load_config(path).model_dump() == config.model_dump()
    assert config.to_yaml(tmp_path / "skipped.yaml", write_file=False) == text
    assert not (tmp_path / "skipped.yaml").exists()


def test_json_file(tmp_path) -> None:
    config = PipelineConfig.model_validate({"scheme": "hashtree"})
    path = tmp_path / "run.json"
    payload = config.to_json(path)
    assert payload["scheme"] == "hashtree"
    assert load_config(path).model_dump() == config.model_dump()


def test_partial_yaml_uses_defaults(tmp_path) -> None:
    path = tmp_path / "partial.yml"
    path.write_text("scheme: uov\ndetector:\n  t_pc: 11\n")
    config = load_config(path)
    assert config.scheme == Scheme.UOV
    assert config.detector.t_pc == 11
    assert config.detector.t_ts == 41


@pytest.mark.parametrize(
    "name, text",
    [
        ("broken.yaml", "scheme: [uov\n"),
        ("broken.json", "{"),
        ("list.yaml", "- uov\n"),
        ("invalid.yaml", "detector:\n  t_ts: 2\n"),
    ],
)
def test_load_config_errors(tmp_path, name: str, text: str) -> None:
    path = tmp_path / name
    path.write_text(text)
    with pytest.raises(ConfigurationError):
        load_config(path)


def test_missing_config_file(tmp_path) -> None:
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.yaml")
