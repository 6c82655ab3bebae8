import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sphere_grid_l1_maximizer
from swcca import (
    ConfigError,
    GroupLasso,
    Lasso,
    SolverConfig,
    SwccaProblem,
    ZeroProjection,
    fit_group,
    fit_l1,
    group_shrink_project,
    update_u,
)
from swcca.penalties import group_problem, lasso_problem


def power_iteration_history(X, Y, seed, iters):
    """Unpenalized alternating normalization, drawn as the solver draws its start."""
    r = np.random.default_rng(seed)
    units = [r.standard_normal(d) for d in (X.shape[1], Y.shape[1], X.shape[0])]
    u, v, w = (x / np.linalg.norm(x) for x in units)
    out = []
    for _ in range(iters):
        u = X.T @ np.diag(w) @ Y @ v
        u /= np.linalg.norm(u)
        v = Y.T @ np.diag(w) @ X @ u
        v /= np.linalg.norm(v)
        w = (X @ u) * (Y @ v)
        w /= np.linalg.norm(w)
        out.append((u, v, w))
    return out


def test_fit_l1_zero_penalty_is_power_iteration(rng):
    X, Y = rng.normal(size=(12, 7)), rng.normal(size=(12, 5))
    res = fit_l1(lasso_problem(X, Y, 0, 0, 0), SolverConfig(seed=4, keep_history=True))
    ref = power_iteration_history(X, Y, 4, res.iterations)
    for got, want in zip(res.history, ref):
        for a, b in zip(got, want):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-9)


def test_fit_l1_huge_lambda_kills_u(rng):
    X, Y = rng.normal(size=(8, 4)), rng.normal(size=(8, 3))
    with pytest.raises(ZeroProjection) as exc:
        fit_l1(lasso_problem(X, Y, 1e6, 0, 0))
    assert (exc.value.vector, exc.value.iteration) == ("u", 1)


@pytest.mark.parametrize("seed", range(5))
def test_l1_u_update_matches_sphere_grid(seed):
    r = np.random.default_rng(seed)
    X, Y = r.normal(size=(6, 3)), r.normal(size=(6, 2))
    v, w = r.normal(size=2), r.normal(size=6)
    z = X.T @ ((Y @ v) * w)
    lam = 0.3 * np.abs(z).max()
    got = update_u(lasso_problem(X, Y, lam, 0, 0), v, w)
    ref = sphere_grid_l1_maximizer(z, lam)
    angle = np.arccos(np.clip(got @ ref, -1, 1))
    assert angle < 1e-3


def test_fit_l1_produces_sparsity_and_monotone(rng):
    X, Y = rng.normal(size=(20, 10)), rng.normal(size=(20, 8))
    res = fit_l1(lasso_problem(X, Y, 1.0, 1.0, 0.5), SolverConfig(seed=1))
    assert np.count_nonzero(res.u) < 10
    assert np.all(np.diff(res.objective_trace) >= -1e-9)
    prob = lasso_problem(X, Y, 1.0, 1.0, 0.5)
    assert res.objective == pytest.approx(prob.penalized_objective(res.u, res.v, res.w), abs=1e-12)


def test_fit_group_singletons_equal_l1(rng):
    X, Y = rng.normal(size=(15, 8)), rng.normal(size=(15, 6))
    lams = (0.8, 0.6, 0.3)
    single = [[[i] for i in range(d)] for d in (8, 6, 15)]
    a = fit_group(group_problem(X, Y, *single, *lams), SolverConfig(seed=9, keep_history=True))
    b = fit_l1(lasso_problem(X, Y, *lams), SolverConfig(seed=9, keep_history=True))
    assert a.iterations == b.iterations
    for got, want in zip(a.history, b.history):
        for x, y in zip(got, want):
            np.testing.assert_allclose(x, y, rtol=0, atol=1e-9)


def test_fit_group_one_group_zero_lambda(rng):
    X, Y = rng.normal(size=(10, 5)), rng.normal(size=(10, 4))
    a = fit_group(group_problem(X, Y, [range(5)], [range(4)], [range(10)], 0, 0, 0),
                  SolverConfig(seed=2, keep_history=True))
    b = fit_l1(lasso_problem(X, Y, 0, 0, 0), SolverConfig(seed=2, keep_history=True))
    for got, want in zip(a.history, b.history):
        for x, y in zip(got, want):
            np.testing.assert_allclose(x, y, atol=1e-12)


def test_two_group_survivors():
    # norms: sqrt(1.25) ~ 1.118 and sqrt(0.5) ~ 0.707, straddling lambda = 1
    z = np.array([1.0, 0.5, 0.5, -0.5])
    out = group_shrink_project(z, 1.0, [[0, 1], [2, 3]])
    assert np.flatnonzero(out).tolist() == [0, 1]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_fit_group_all_or_nothing(seed):
    r = np.random.default_rng(seed)
    X, Y = r.normal(size=(12, 9)), r.normal(size=(12, 6))
    gu, gv, gw = GroupLasso.contiguous(0, 9, 3).groups, GroupLasso.contiguous(0, 6, 2).groups, \
        GroupLasso.contiguous(0, 12, 4).groups
    prob = group_problem(X, Y, gu, gv, gw, 0.5, 0.5, 0.2)
    try:
        res = fit_group(prob, SolverConfig(seed=seed))
    except ZeroProjection:
        return
    for vec, groups in ((res.u, gu), (res.v, gv), (res.w, gw)):
        for g in groups:
            nz = np.count_nonzero(vec[list(g)])
            assert nz in (0, len(g))
    assert np.all(np.diff(res.objective_trace) >= -1e-9)


def test_kind_checks(rng):
    X, Y = rng.normal(size=(5, 3)), rng.normal(size=(5, 2))
    with pytest.raises(ConfigError):
        fit_l1(SwccaProblem(X, Y, 1, 1, 1))
    with pytest.raises(ConfigError):
        fit_group(SwccaProblem(X, Y, Lasso(0.1), Lasso(0.1), Lasso(0.1)))
