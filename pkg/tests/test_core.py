import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import naive_pearson, naive_weighted_objective
from swcca import (
    ConstantColumn,
    DataError,
    DataMatrix,
    DegenerateVariance,
    DimensionMismatch,
    GroupLasso,
    HardCardinality,
    InvalidK,
    Lasso,
    SolverConfig,
    center_columns,
    correlation_level,
    standardize_columns,
    weighted_objective,
)
from swcca.errors import ConfigError


def test_center_single_column():
    out = center_columns(np.array([[1.0], [2.0], [3.0]]))
    np.testing.assert_array_equal(out.values[:, 0], [-1.0, 0.0, 1.0])
    assert out.preprocessing == "column-centered"


def test_center_is_identity_on_centered_column():
    out = center_columns(np.array([[-1.0], [1.0]]))
    np.testing.assert_array_equal(out.values[:, 0], [-1.0, 1.0])


def test_center_2x2():
    # column means (3, 6)
    out = center_columns([[2.0, 4.0], [4.0, 8.0]])
    np.testing.assert_array_equal(out.values, [[-1.0, -2.0], [1.0, 2.0]])


def test_center_rejects_already_processed():
    m = center_columns([[1.0], [2.0]])
    with pytest.raises(DataError):
        center_columns(m)


def test_standardize_two_point_column():
    # sample sd of [0, 2] is sqrt(2); centered values are -1, 1
    out = standardize_columns([[0.0], [2.0]])
    np.testing.assert_allclose(out.values[:, 0], [-1 / np.sqrt(2), 1 / np.sqrt(2)], rtol=0, atol=1e-15)


def test_standardize_constant_column():
    with pytest.raises(ConstantColumn) as exc:
        standardize_columns([[1.0, 5.0], [2.0, 5.0], [4.0, 5.0]])
    assert exc.value.index == 1


def test_standardize_idempotent(rng):
    x = rng.normal(3.0, 2.0, size=(20, 6))
    once = standardize_columns(x)
    twice = standardize_columns(once.values)
    np.testing.assert_allclose(twice.values, once.values, atol=1e-9)
    np.testing.assert_allclose(once.values.mean(0), 0, atol=1e-9)
    np.testing.assert_allclose(once.values.std(0, ddof=1), 1, atol=1e-6)


def test_datamatrix_validation():
    with pytest.raises(DataError):
        DataMatrix(np.array([[1.0, np.nan]]))
    with pytest.raises(DataError):
        DataMatrix(np.zeros((0, 3)))
    with pytest.raises(DataError):
        DataMatrix(np.array([[1.0], [2.0]]), "column-centered")
    m = DataMatrix(np.arange(6.0).reshape(3, 2))
    assert (m.n, m.p) == (3, 2)
    assert not m.values.flags.writeable


def test_objective_zero_weights(rng):
    X, Y = rng.normal(size=(5, 4)), rng.normal(size=(5, 3))
    assert weighted_objective(X, Y, rng.normal(size=4), rng.normal(size=3), np.zeros(5)) == 0.0


def test_objective_identity_pick():
    I = np.eye(2)
    assert weighted_objective(I, I, [1.0, 0.0], [1.0, 0.0], [1.0, 0.0]) == 1.0


def test_objective_matches_naive_loop(rng):
    X, Y = rng.normal(size=(5, 4)), rng.normal(size=(5, 3))
    u, v, w = rng.normal(size=4), rng.normal(size=3), rng.normal(size=5)
    assert weighted_objective(X, Y, u, v, w) == pytest.approx(
        naive_weighted_objective(X, Y, u, v, w), abs=1e-12)


def test_objective_dimension_checks(rng):
    X, Y = rng.normal(size=(5, 4)), rng.normal(size=(5, 3))
    with pytest.raises(DimensionMismatch):
        weighted_objective(X, Y, np.ones(3), np.ones(3), np.ones(5))
    with pytest.raises(DimensionMismatch):
        weighted_objective(X, Y[:4], np.ones(4), np.ones(3), np.ones(5))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.1, 10.0))
def test_objective_linear_in_each_block(seed, c):
    r = np.random.default_rng(seed)
    X, Y = r.normal(size=(6, 4)), r.normal(size=(6, 3))
    u, v, w = r.normal(size=4), r.normal(size=3), r.normal(size=6)
    base = weighted_objective(X, Y, u, v, w)
    for args in ((c * u, v, w), (u, c * v, w), (u, v, c * w)):
        assert weighted_objective(X, Y, *args) == pytest.approx(c * base, abs=1e-12 * max(1, abs(c * base)))


def test_uniform_weights_reduce_to_plain_cca(rng):
    n = 7
    X, Y = rng.normal(size=(n, 4)), rng.normal(size=(n, 3))
    u, v = rng.normal(size=4), rng.normal(size=3)
    w = np.full(n, 1 / np.sqrt(n))
    assert weighted_objective(X, Y, u, v, w) == pytest.approx(u @ X.T @ Y @ v / np.sqrt(n), abs=1e-12)


def test_correlation_self_and_anti(rng):
    X = rng.normal(size=(8, 4))
    u = rng.normal(size=4)
    w = np.r_[1.0, 2.0, 0.0, 0.5, 1.0, 0.0, 3.0, 1.0]
    assert correlation_level(X, X, u, u, w) == pytest.approx(1.0, abs=1e-12)
    assert correlation_level(X, -X, u, u, w) == pytest.approx(-1.0, abs=1e-12)


def test_correlation_matches_textbook_pearson():
    X = np.array([[1.0, 2.0], [0.5, -1.0], [2.0, 0.0], [-1.0, 1.0]])
    Y = np.array([[0.3], [1.2], [-0.7], [2.0]])
    u, v, w = np.array([0.6, 0.8]), np.array([1.0]), np.array([0.5, 0.5, 0.5, 0.5])
    a = list((X @ u) * w)
    b = list((Y @ v) * w)
    assert correlation_level(X, Y, u, v, w) == pytest.approx(naive_pearson(a, b), abs=1e-12)


def test_correlation_default_weights_are_ones(rng):
    X, Y = rng.normal(size=(6, 3)), rng.normal(size=(6, 2))
    u, v = rng.normal(size=3), rng.normal(size=2)
    assert correlation_level(X, Y, u, v) == correlation_level(X, Y, u, v, np.ones(6))


def test_correlation_degenerate():
    X = np.ones((4, 2))
    with pytest.raises(DegenerateVariance):
        correlation_level(X, X, [1.0, 0.0], [1.0, 0.0], np.ones(4))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(0.01, 100.0), st.floats(0.01, 100.0))
def test_correlation_scale_invariant(seed, a, b):
    r = np.random.default_rng(seed)
    X, Y = r.normal(size=(9, 3)), r.normal(size=(9, 2))
    u, v, w = r.normal(size=3), r.normal(size=2), r.normal(size=9)
    ref = correlation_level(X, Y, u, v, w)
    assert correlation_level(X, Y, a * u, b * v, w) == pytest.approx(ref, abs=1e-12)


def test_penalty_validation():
    HardCardinality(3).validate(3)
    with pytest.raises(InvalidK):
        HardCardinality(0).validate(3)
    with pytest.raises(InvalidK):
        HardCardinality(4).validate(3)
    with pytest.raises(ConfigError):
        Lasso(-1.0).validate(3)
    GroupLasso(1.0, [[0, 1], [2]]).validate(3)
    for bad in ([[0, 1]], [[0, 1], [1, 2]], [[0, 1], [], [2]], [[0, 3], [1, 2]]):
        with pytest.raises(ConfigError):
            GroupLasso(1.0, bad).validate(3)


def test_penalty_values():
    x = np.array([3.0, -4.0, 1.0])
    assert HardCardinality(2).value(x) == 0.0
    assert Lasso(0.5).value(x) == 4.0
    assert GroupLasso(2.0, [[0, 1], [2]]).value(x) == 12.0
    assert GroupLasso.contiguous(1.0, 5, 2).groups == ((0, 1), (2, 3), (4,))


def test_solver_config_invariants():
    with pytest.raises(ConfigError):
        SolverConfig(max_iters=0)
    with pytest.raises(ConfigError):
        SolverConfig(init="svd", restarts=2)
    with pytest.raises(ConfigError):
        SolverConfig(init="supplied")
    with pytest.raises(ConfigError):
        SolverConfig(delta_tol=-1)
    assert SolverConfig().max_iters == 1000
    assert SolverConfig().delta_tol == 1e-6
