import math
import random
from typing import Sequence

import numpy as np
import pytest

from hpc_sentry.exceptions import FeatureExtractionError
from hpc_sentry.features import covariance, jacobi_eigh, kendall_tau, kurtosis, pca, window_statistics


def pairwise_tau_b(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    concordance, ties_x, ties_y = 0, 0, 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (x[j] > x[i]) - (x[j] < x[i])
            dy = (y[j] > y[i]) - (y[j] < y[i])
            ties_x += dx == 0
            ties_y += dy == 0
            concordance += dx * dy
    pairs = n * (n - 1) // 2
    denominator = math.sqrt((pairs - ties_x) * (pairs - ties_y))
    return 0.0 if denominator == 0 else concordance / denominator


def test_kendall_tau_matches_the_pairwise_definition() -> None:
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(2, 25)
        x = [rng.randint(0, 5) for _ in range(n)]
        y = [rng.randint(0, 5) for _ in range(n)]
        assert kendall_tau(x, y) == pytest.approx(pairwise_tau_b(x, y), abs=1e-12)


def test_kendall_tau_extremes() -> None:
    assert kendall_tau([1, 2, 3, 4], [0, 1, 2, 3]) == pytest.approx(1.0)
    assert kendall_tau([4, 3, 2, 1], [0, 1, 2, 3]) == pytest.approx(-1.0)
    assert kendall_tau([5, 5, 5], [0, 1, 2]) == 0.0


@pytest.mark.parametrize("x, y", [([1, 2], [1, 2, 3]), ([1], [1])])
def test_kendall_tau_errors(x, y) -> None:
    with pytest.raises(FeatureExtractionError):
        kendall_tau(x, y)


def test_kurtosis() -> None:
    assert kurtosis([3.0, 3.0, 3.0]) == 0.0
    assert kurtosis([1, -1, 1, -1]) == pytest.approx(1.0)
    assert kurtosis([0, 0, 0, 1]) == pytest.approx(0.08203125 / 0.1875**2)
    with pytest.raises(FeatureExtractionError):
        kurtosis([1.0])


def test_window_statistics() -> None:
    mean, kurt, tau, peak = window_statistics(np.array([1.0, 2.0, 3.0, 4.0]))
    assert mean == pytest.approx(2.5)
    assert kurt == pytest.approx(2.5625 / 1.25**2)
    assert tau == pytest.approx(1.0)
    assert peak == 4.0


def test_jacobi_matches_the_characteristic_polynomial() -> None:
    matrix = np.array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 1.0]])
    eigenvalues, vectors = jacobi_eigh(matrix)
    roots = np.sort(np.real(np.roots(np.poly(matrix))))
    assert np.allclose(np.sort(eigenvalues), roots, atol=1e-9)
    assert np.allclose(matrix @ vectors, vectors * eigenvalues, atol=1e-9)


def test_jacobi_keeps_a_diagonal_matrix() -> None:
    eigenvalues, vectors = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(eigenvalues, [3.0, 1.0, 2.0])
    assert np.allclose(vectors, np.eye(3))


def test_pca_components() -> None:
    rng = np.random.default_rng(0)
    data = rng.normal(size=(200, 5)) @ rng.normal(size=(5, 5))
    result = pca(data)
    v = result.components
    assert np.allclose(v.T @ v, np.eye(5), atol=1e-9)
    assert np.allclose(v @ np.diag(result.eigenvalues) @ v.T, covariance(data), atol=1e-8)
    assert np.all(np.diff(result.eigenvalues) <= 1e-12)
    for j in range(5):
        assert v[np.argmax(np.abs(v[:, j])), j] > 0


def test_covariance_uses_the_sample_estimate() -> None:
    data = np.array([[0.0, 1.0], [2.0, 1.0]])
    assert np.allclose(covariance(data), [[2.0, 0.0], [0.0, 0.0]])


def test_pca_of_constant_data() -> None:
    result = pca(np.ones((10, 3)), 2)
    assert np.allclose(result.eigenvalues, 0.0)
    assert result.components.shape == (3, 2)
    assert np.allclose(result.components, np.eye(3)[:, :2])


def test_pca_errors() -> None:
    with pytest.raises(FeatureExtractionError):
        pca(np.ones((1, 3)))
    with pytest.raises(FeatureExtractionError):
        pca(np.ones((4, 3)), 4)
