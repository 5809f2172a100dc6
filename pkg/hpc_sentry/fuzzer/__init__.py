from .corpus import CorpusEntry, FuzzStats, SeedCorpus, random_corpus
from .coverage import BUCKET_LOWER_BOUNDS, CoverageMap, bucket_index, update_coverage
from .fuzzer import execute, fuzz, trace_digest
from .mutation import MutationOp, flip_bit, havoc, mutate
from .report import CoverageReport, CoverageRow, coverage_report, measure_coverage

__all__ = [
    "BUCKET_LOWER_BOUNDS",
    "CorpusEntry",
    "CoverageMap",
    "CoverageReport",
    "CoverageRow",
    "FuzzStats",
    "MutationOp",
    "SeedCorpus",
    "bucket_index",
    "coverage_report",
    "execute",
    "flip_bit",
    "fuzz",
    "havoc",
    "measure_coverage",
    "mutate",
    "random_corpus",
    "trace_digest",
    "update_coverage",
]
