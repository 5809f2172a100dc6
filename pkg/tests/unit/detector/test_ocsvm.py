import numpy as np
import pytest

from hpc_sentry.detector import overlap_fraction, rbf_kernel, solve_dual, train_ocsvm
from hpc_sentry.exceptions import FeatureExtractionError, SolverConvergenceError
from hpc_sentry.features import FeatureKind, FeatureMatrix
from hpc_sentry.vpmu import EventKind


def gaussian_features(rows: int = 200, seed: int = 0) -> FeatureMatrix:
    rng = np.random.default_rng(seed)
    return FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=rng.normal(loc=[100.0, 5.0], scale=[10.0, 1.0], size=(rows, 2)),
        columns=["CYCLES", "L2_TCM"],
        counters=[EventKind.CYCLES, EventKind.L2_TCM],
    )


def test_rbf_kernel() -> None:
    a = np.array([[0.0, 0.0], [1.0, 1.0]])
    k = rbf_kernel(a, a, 0.5)
    assert np.allclose(np.diag(k), 1.0)
    assert k[0, 1] == pytest.approx(np.exp(-1.0))


@pytest.mark.parametrize("nu", [0.05, 0.2, 0.5])
def test_dual_satisfies_the_constraints_and_kkt(nu: float) -> None:
    rows = np.random.default_rng(1).normal(size=(120, 3))
    q = rbf_kernel(rows, rows, 0.3)
    solution = solve_dual(q, nu)
    alphas = solution.alphas
    bound = 1.0 / (nu * 120)
    assert alphas.sum() == pytest.approx(1.0)
    assert np.all(alphas >= -1e-12) and np.all(alphas <= bound + 1e-12)
    gradient = q @ alphas
    up, low = alphas < bound, alphas > 0
    if up.any() and low.any():
        assert gradient[low].max() - gradient[up].min() < 1e-6 + 1e-9
    assert solution.kkt_violation < 1e-6


@pytest.mark.parametrize("nu", [0.1, 0.3])
def test_nu_bounds_outliers_and_support_vectors(nu: float) -> None:
    features = gaussian_features()
    model = train_ocsvm(features, gamma=0.5, nu=nu)
    decision = model.decision_function(features)
    assert np.count_nonzero(decision < -1e-5) <= nu * features.n_rows
    assert len(model.alphas) >= nu * features.n_rows - 1e-9
    assert model.n_train == 200
    assert model.columns == ["CYCLES", "L2_TCM"]


def test_far_rows_are_rejected() -> None:
    features = gaussian_features()
    model = train_ocsvm(features, gamma=0.5, nu=0.1)
    probe = FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=[[100.0, 5.0], [600.0, 50.0]],
        columns=features.columns,
        counters=features.counters,
    )
    assert list(model.predict(probe)) == [1, -1]


def test_training_is_deterministic() -> None:
    first = train_ocsvm(gaussian_features(), gamma=0.5, nu=0.2)
    second = train_ocsvm(gaussian_features(), gamma=0.5, nu=0.2)
    assert first.model_dump_json() == second.model_dump_json()


def test_training_needs_ten_rows() -> None:
    with pytest.raises(FeatureExtractionError):
        train_ocsvm(gaussian_features(rows=9), gamma=0.5, nu=0.1)


@pytest.mark.parametrize("gamma, nu", [(0.0, 0.1), (0.5, 0.0), (0.5, 1.5)])
def test_invalid_hyper_parameters(gamma: float, nu: float) -> None:
    with pytest.raises(ValueError):
        train_ocsvm(gaussian_features(), gamma=gamma, nu=nu)


def test_column_mismatch() -> None:
    features = gaussian_features()
    model = train_ocsvm(features, gamma=0.5, nu=0.1)
    with pytest.raises(FeatureExtractionError):
        model.decision_values(np.zeros((3, 3)))
    with pytest.raises(FeatureExtractionError):
        model.predict(features.subset_counters([EventKind.CYCLES]))


def test_iteration_cap() -> None:
    rows = np.random.default_rng(2).normal(size=(50, 2))
    with pytest.raises(SolverConvergenceError) as info:
        solve_dual(rbf_kernel(rows, rows, 1.0), 0.5, max_iterations=0)
    assert info.value.iterations == 0


def test_overlap_fraction() -> None:
    features = gaussian_features()
    model = train_ocsvm(features, gamma=0.5, nu=0.1)
    probe = FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=[[100.0, 5.0], [600.0, 50.0]],
        columns=features.columns,
        counters=features.counters,
    )
    assert overlap_fraction(model, probe) == 0.5
    empty = FeatureMatrix(
        kind=FeatureKind.CHECKPOINT,
        values=np.zeros((0, 2)),
        columns=features.columns,
        counters=features.counters,
    )
    with pytest.raises(ValueError):
        overlap_fraction(model, empty)
