import hashlib
import os

import pandas as pd
import pytest

from hpc_sentry.utils import (
    atomic_write_csv,
    atomic_write_text,
    digest_file,
    digest_payload,
    feature_label,
    normalize_counter_name,
    parse_feature_label,
    read_environment,
)


@pytest.mark.parametrize("name", ["L1_ICM", "l1-icm", "l1 icm", "L1.ICM", "  l1_icm  "])
def test_normalize_counter_name(name: str) -> None:
    assert normalize_counter_name(name) == "L1_ICM"


def test_normalize_empty_counter_name() -> None:
    with pytest.raises(AssertionError):
        normalize_counter_name("  ")


def test_feature_label() -> None:
    assert feature_label("Mean", "l2-dcm") == "mean_L2_DCM"
    assert parse_feature_label("kurtosis_BR_MSP") == ("kurtosis", "BR_MSP")


@pytest.mark.parametrize("label", ["mean", "MEAN_CYCLES", "mean-cycles", "_CYCLES"])
def test_invalid_feature_label(label: str) -> None:
    with pytest.raises(ValueError):
        parse_feature_label(label)


def test_digest_ignores_key_order() -> None:
    assert digest_payload({"a": 1, "b": [1, 2]}) == digest_payload({"b": [1, 2], "a": 1})
    assert digest_payload({"a": 1}) != digest_payload({"a": 2})


def test_digest_file(tmp_path) -> None:
    path = tmp_path / "blob.bin"
    path.write_bytes(b"hpc")
    assert digest_file(path) == hashlib.sha256(b"hpc").hexdigest()


def test_atomic_write_creates_parents_and_leaves_no_temporaries(tmp_path) -> None:
    path = tmp_path / "a" / "b" / "note.txt"
    atomic_write_text(path, "one")
    atomic_write_text(path, "two")
    assert path.read_text() == "two"
    assert os.listdir(path.parent) == ["note.txt"]


def test_atomic_write_csv_has_no_index(tmp_path) -> None:
    path = tmp_path / "frame.csv"
    atomic_write_csv(path, pd.DataFrame({"x": [1, 2], "y": [3, 4]}))
    assert path.read_bytes() == b"x,y\n1,3\n2,4\n"


def test_read_environment(monkeypatch) -> None:
    monkeypatch.setenv("HPC_SENTRY_TEST_KEY", "  value ")
    assert read_environment("HPC_SENTRY_TEST_KEY") == "value"
    monkeypatch.setenv("HPC_SENTRY_TEST_KEY", " ")
    assert read_environment("HPC_SENTRY_TEST_KEY", "fallback") == "fallback"
    monkeypatch.delenv("HPC_SENTRY_TEST_KEY")
    assert read_environment("HPC_SENTRY_TEST_KEY") is None
