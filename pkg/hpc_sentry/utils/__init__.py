from .digest import canonical_json, digest_file, digest_payload
from .io import atomic_write_bytes, atomic_write_csv, atomic_write_text
from .naming_conventions import (
    feature_label,
    normalize_counter_name,
    parse_feature_label,
)
from .read_env import read_environment

__all__ = [
    "atomic_write_bytes",
    "atomic_write_csv",
    "atomic_write_text",
    "canonical_json",
    "digest_file",
    "digest_payload",
    "feature_label",
    "normalize_counter_name",
    "parse_feature_label",
    "read_environment",
]
