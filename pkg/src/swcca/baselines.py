"""Comparison methods without sample weights.

``fit_l0_scca`` is the cardinality-constrained diagonal CCA (the weighted
problem with ``w`` fixed to ``1/sqrt(n)``), written as its own loop on
``X^T Y`` so it can serve as an independent check of the weighted solver.

``fit_pmd`` re-implements the penalized matrix decomposition of Witten,
Tibshirani and Hastie (2009): alternating soft thresholding where the
threshold is found by bisection so that ``||u||_1 <= c1`` at unit L2 norm.
As in their reference implementation, columns are standardized first unless
``standardize=False``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import HardCardinality, MatrixLike, SolverConfig, as_array, standardize_columns
from .errors import ConfigError, DimensionMismatch, InfeasibleRadius, ZeroProjection
from .projections import hard_project, soft_threshold
from .solver import _unit, leading_singular_pair, random_start


@dataclass
class BaselineFit:
    u: np.ndarray
    v: np.ndarray
    objective_trace: list
    iterations: int
    converged: bool
    termination_reason: str
    restart: int = 0
    history: list | None = None

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def _pair(X, Y):
    x, y = as_array(X), as_array(Y)
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} samples but Y has {y.shape[0]}")
    return x, y


def _hard(z, k, name, it):
    try:
        return hard_project(z, k)
    except ZeroProjection as exc:
        raise exc.located(vector=name, iteration=it) from None


def _scca_run(x, y, k_u, k_v, config: SolverConfig, seed: int) -> BaselineFit:
    p, q = x.shape[1], y.shape[1]
    if config.init == "random":
        rng = np.random.default_rng(seed)
        u = random_start(HardCardinality(k_u), rng, p)
        v = random_start(HardCardinality(k_v), rng, q)
    elif config.init == "svd":
        a, b = leading_singular_pair(x, y)
        u, v = hard_project(a, k_u), hard_project(b, k_v)
    else:
        u, v = _unit(config.init_vectors[0], p, "u"), _unit(config.init_vectors[1], q, "v")
    trace = []
    history = [] if config.keep_history else None
    reason = "max_iters"
    it = 0
    for it in range(1, config.max_iters + 1):
        u_new = _hard(x.T @ (y @ v), k_u, "u", it)
        v_new = _hard(y.T @ (x @ u_new), k_v, "v", it)
        trace.append(float(u_new @ (x.T @ (y @ v_new))))
        du = float(np.sum((u_new - u) ** 2))
        dv = float(np.sum((v_new - v) ** 2))
        u, v = u_new, v_new
        if history is not None:
            history.append((u, v))
        if du < config.delta_tol and dv < config.delta_tol:
            reason = "delta_below_tol"
            break
        if (config.objective_tol > 0 and len(trace) > 1
                and abs(trace[-1] - trace[-2]) < config.objective_tol):
            reason = "objective_delta_below_tol"
            break
    return BaselineFit(u, v, trace, it, reason != "max_iters", reason, history=history)


def fit_l0_scca(X: MatrixLike, Y: MatrixLike, k_u: int, k_v: int,
                config: SolverConfig | None = None) -> BaselineFit:
    """Maximize ``u^T X^T Y v`` with ``||u||_0 <= k_u``, ``||v||_0 <= k_v``, unit norms.

    Initialization and restarts draw from the same streams as the weighted
    solver, so a fit whose ``w`` is frozen at uniform follows the same path.
    """
    config = config or SolverConfig()
    x, y = _pair(X, Y)
    HardCardinality(k_u).validate(x.shape[1])
    HardCardinality(k_v).validate(y.shape[1])
    best, first_error = None, None
    for r in range(config.restarts):
        try:
            res = _scca_run(x, y, k_u, k_v, config, config.seed + r)
        except ZeroProjection as exc:
            first_error = first_error or exc
            continue
        res.restart = r
        if best is None or res.objective > best.objective:
            best = res
    if best is None:
        raise first_error
    return best


@dataclass(frozen=True)
class PmdConfig:
    """L1 radii ``c1``, ``c2`` for ``u`` and ``v``; each must lie in ``[1, sqrt(dim)]``."""

    c1: float
    c2: float
    max_iters: int = 1000
    tol: float = 1e-12
    standardize: bool = True

    @classmethod
    def from_fraction(cls, c, p: int, q: int, **kwargs) -> "PmdConfig":
        """Radii ``c * sqrt(p)`` and ``c * sqrt(q)``; ``c`` may be a pair."""
        c_u, c_v = (c, c) if np.isscalar(c) else c
        return cls(c_u * np.sqrt(p), c_v * np.sqrt(q), **kwargs)

    def to_dict(self) -> dict:
        return {"c1": self.c1, "c2": self.c2, "max_iters": self.max_iters,
                "tol": self.tol, "standardize": self.standardize}


def l1_threshold(z, radius: float) -> float:
    """Smallest soft threshold ``lam`` with ``||S(z)||_1 / ||S(z)||_2 <= radius``.

    Returns 0 when plain normalization already satisfies the bound.  The
    ratio decreases monotonically in ``lam``, so bisection on ``[0, max|z|)``
    runs until the bracket hits floating-point resolution; the feasible end
    is returned.
    """
    a = np.abs(np.asarray(z, dtype=float))
    l2 = np.linalg.norm(a)
    if l2 == 0:
        raise ZeroProjection("cannot threshold the zero vector")
    if a.sum() / l2 <= radius:
        return 0.0
    lo, hi = 0.0, float(a.max())
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s = np.maximum(a - mid, 0.0)
        ns = np.linalg.norm(s)
        if ns > 0 and s.sum() / ns > radius:
            lo = mid
        else:
            hi = mid
    if not np.any(a > hi):
        # Ties at max|z| with radius below sqrt(#ties): no exact solution.
        return lo
    return hi


def l1_project(z, radius: float) -> np.ndarray:
    """Maximizer of ``u . z`` over ``||u||_2 <= 1``, ``||u||_1 <= radius``."""
    s = soft_threshold(z, l1_threshold(z, radius))
    nrm = np.linalg.norm(s)
    if nrm == 0:
        raise ZeroProjection("soft threshold removes every entry")
    return s / nrm


def fit_pmd(X: MatrixLike, Y: MatrixLike, config: PmdConfig) -> BaselineFit:
    """Rank-one penalized matrix decomposition of ``X^T Y`` with L1 bounds.

    Starts from the leading right singular vector of ``X^T Y`` and
    alternates ``u = P1(X^T Y v)``, ``v = P2(Y^T X u)``.  Returned loadings
    live in the (standardized, if enabled) variable space; correlation on the
    caller's matrices is computed by the caller.
    """
    x, y = _pair(X, Y)
    p, q = x.shape[1], y.shape[1]
    for c, dim in ((config.c1, p), (config.c2, q)):
        if not (c >= 1.0 and c <= np.sqrt(dim) * (1 + 1e-12)):
            raise InfeasibleRadius(c, np.sqrt(dim))
    if config.max_iters < 1:
        raise ConfigError("max_iters must be positive")
    if config.standardize:
        x, y = standardize_columns(x).values, standardize_columns(y).values
    _, v = leading_singular_pair(x, y)
    u = np.zeros(p)
    trace = []
    reason = "max_iters"
    it = 0
    for it in range(1, config.max_iters + 1):
        try:
            u_new = l1_project(x.T @ (y @ v), config.c1)
            v_new = l1_project(y.T @ (x @ u_new), config.c2)
        except ZeroProjection as exc:
            raise exc.located(iteration=it) from None
        trace.append(float(u_new @ (x.T @ (y @ v_new))))
        du = float(np.sum((u_new - u) ** 2))
        dv = float(np.sum((v_new - v) ** 2))
        u, v = u_new, v_new
        if du < config.tol and dv < config.tol:
            reason = "delta_below_tol"
            break
    return BaselineFit(u, v, trace, it, reason != "max_iters", reason)
