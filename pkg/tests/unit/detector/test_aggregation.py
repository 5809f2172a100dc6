import itertools
import random

import pytest
from pydantic import ValidationError

from hpc_sentry.detector import (
    SUBVERTED,
    TRUSTED,
    Verdict,
    accuracy,
    aggregate_majority,
    build_verdict,
    decision_auc,
)


def majority_oracle(labels, t):
    out = []
    for start in range(0, len(labels) - t + 1, t):
        chunk = labels[start : start + t]
        out.append(TRUSTED if chunk.count(TRUSTED) > chunk.count(SUBVERTED) else SUBVERTED)
    return out


def test_majority_matches_the_oracle_exhaustively() -> None:
    for length in range(1, 13):
        for labels in itertools.product((TRUSTED, SUBVERTED), repeat=length):
            for t in (1, 3, 5, 7, 9, 11):
                if t > length:
                    continue
                assert list(aggregate_majority(labels, t)) == majority_oracle(list(labels), t)


@pytest.mark.parametrize("labels, t", [([1, 1], 2), ([1, 1], 0), ([1, 1], 3)])
def test_majority_errors(labels, t: int) -> None:
    with pytest.raises(ValueError):
        aggregate_majority(labels, t)


def test_verdict() -> None:
    verdict = build_verdict([1, 1, -1, -1, -1, 1, 1, 1, 1, -1], 3, truth=TRUSTED)
    assert verdict.subset_labels == [1, -1, 1]
    assert verdict.pos == pytest.approx(2 / 3)
    assert verdict.neg == pytest.approx(1 / 3)
    assert verdict.accuracy == pytest.approx(2 / 3)
    assert verdict.label == TRUSTED and verdict.trusted
    assert len(verdict.row_labels) == 10


def test_half_trusted_subsets_are_subverted() -> None:
    verdict = build_verdict([1, 1, 1, -1, -1, -1], 3)
    assert verdict.pos == 0.5
    assert verdict.label == SUBVERTED
    assert verdict.accuracy is None


def test_verdict_threshold_is_odd() -> None:
    with pytest.raises(ValidationError):
        Verdict(row_labels=[], subset_labels=[], threshold=4, pos=0.0, neg=1.0, label=-1)


def test_accuracy() -> None:
    assert accuracy([1, -1, -1, -1], SUBVERTED) == 0.75
    with pytest.raises(ValueError):
        accuracy([], TRUSTED)


def test_auc() -> None:
    assert decision_auc([3, 4], [1, 2]) == 1.0
    assert decision_auc([1, 2], [3, 4]) == 0.0
    assert decision_auc([1], [1]) == 0.5
    with pytest.raises(ValueError):
        decision_auc([], [1])


def test_auc_matches_pair_counting() -> None:
    rng = random.Random(8)
    for _ in range(200):
        a = [rng.randint(0, 9) for _ in range(rng.randint(1, 15))]
        b = [rng.randint(0, 9) for _ in range(rng.randint(1, 15))]
        wins = sum((x > y) + 0.5 * (x == y) for x in a for y in b)
        assert decision_auc(a, b) == pytest.approx(wins / (len(a) * len(b)))
