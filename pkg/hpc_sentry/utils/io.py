"""
This file contains the file writing helpers. Every artifact is written to a
temporary sibling first and then moved into place.
"""

import os
import tempfile
from typing import Union

import pandas as pd

PathLike = Union[str, "os.PathLike[str]"]


def atomic_write_bytes(path: PathLike, data: bytes) -> None:
    """
    Write `data` to `path` atomically, creating parent directories as needed.
    """

    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(
        dir=directory, prefix=".tmp-", suffix=os.path.basename(path)
    )
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def atomic_write_text(path: PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_csv(path: PathLike, frame: pd.DataFrame) -> None:
    """
    Write a DataFrame as CSV without the index, using "\\n" line endings on every platform.
    """

    atomic_write_text(path, frame.to_csv(index=False, lineterminator="\n"))
