import hashlib
import json
from typing import Any

from .io import PathLike


def canonical_json(payload: Any) -> str:
    """
    Serialize `payload` with sorted keys and no whitespace.
    """

    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def digest_payload(payload: Any) -> str:
    """
    SHA-256 hex digest of the canonical JSON form of `payload`.
    """

    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def digest_file(path: PathLike) -> str:
    """
    SHA-256 hex digest of a file's bytes.
    """

    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
