"""
This file contains the seed corpus produced by the fuzzer, its persistence and
the size- and length-matched random baseline corpus.
"""

import random
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from ..utils.io import PathLike, atomic_write_bytes, atomic_write_csv

MANIFEST_FILE = "manifest.csv"
MANIFEST_COLUMNS = ["filename", "admitted_at_exec", "new_edges", "trace_digest"]


class FuzzStats(BaseModel):
    """
    Summary of a fuzz run.

    Attributes
    ----------
    executions : int
        Target executions, dry runs included.
    aborts : int
        Executions where the target aborted.
    admitted : int
        Entries admitted beyond the initial inputs.
    edges : int
        Edge-map slots covered at the end of the run.
    blocks : int
        Basic blocks seen at the end of the run.
    """

    executions: int = 0
    aborts: int = 0
    admitted: int = 0
    edges: int = 0
    blocks: int = 0


class CorpusEntry(BaseModel):
    data: bytes
    trace_digest: str = ""
    new_edges: int = 0
    admitted_at_exec: int = 0

    @property
    def energy(self) -> int:
        return self.new_edges + 1


class SeedCorpus(BaseModel):
    """
    Inputs admitted by a fuzz run, in admission order.

    Attributes
    ----------
    entries : List[CorpusEntry]
        The admitted inputs.
    rng_seed : int
        Seed of the run that produced the corpus.
    stats : Optional[FuzzStats]
        Run summary, if the corpus came from a fuzz run.
    """

    entries: List[CorpusEntry] = []
    rng_seed: int = 0
    stats: Optional[FuzzStats] = None

    @property
    def inputs(self) -> List[bytes]:
        return [e.data for e in self.entries]

    @property
    def lengths(self) -> List[int]:
        return [len(e.data) for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def save(self, directory: PathLike) -> Path:
        """
        Write one `id_XXXXXX.bin` file per entry and the manifest CSV.
        """

        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = []
        for i, entry in enumerate(self.entries):
            filename = f"id_{i:06d}.bin"
            atomic_write_bytes(directory / filename, entry.data)
            rows.append([filename, entry.admitted_at_exec, entry.new_edges, entry.trace_digest])
        manifest = directory / MANIFEST_FILE
        atomic_write_csv(manifest, pd.DataFrame(rows, columns=MANIFEST_COLUMNS))
        return manifest

    @classmethod
    def load(cls, directory: PathLike, rng_seed: int = 0) -> "SeedCorpus":
        directory = Path(directory)
        manifest = pd.read_csv(directory / MANIFEST_FILE, dtype={"trace_digest": str}).fillna("")
        entries = [
            CorpusEntry(
                data=(directory / row.filename).read_bytes(),
                admitted_at_exec=int(row.admitted_at_exec),
                new_edges=int(row.new_edges),
                trace_digest=str(row.trace_digest),
            )
            for row in manifest.itertuples(index=False)
        ]
        return cls(entries=entries, rng_seed=rng_seed)


def random_corpus(reference: Union[SeedCorpus, Sequence[bytes]], rng_seed: int) -> SeedCorpus:
    """
    Uniform random inputs with the same number of entries and the same lengths as `reference`.
    """

    lengths = reference.lengths if isinstance(reference, SeedCorpus) else [len(d) for d in reference]
    rng = random.Random(rng_seed)
    return SeedCorpus(
        entries=[CorpusEntry(data=rng.randbytes(n)) for n in lengths],
        rng_seed=rng_seed,
    )
