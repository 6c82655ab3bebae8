"""Alternating maximization for sparse weighted CCA.

Each sweep updates ``u``, then ``v``, then ``w``; every update is the exact
maximizer of its block sub-problem, so the logged objective never decreases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import (
    HardCardinality,
    MatrixLike,
    PenaltySpec,
    SolverConfig,
    SwccaFit,
    as_array,
    weighted_objective,
)
from .errors import ConfigError, DimensionMismatch, NonFiniteValue, ZeroProjection
from .projections import hard_project, project

logger = logging.getLogger(__name__)


def as_penalty(spec) -> PenaltySpec:
    """Integers are shorthand for a cardinality bound."""
    if isinstance(spec, (int, np.integer)) and not isinstance(spec, bool):
        return HardCardinality(int(spec))
    return spec


@dataclass(frozen=True)
class SwccaProblem:
    X: MatrixLike
    Y: MatrixLike
    penalty_u: PenaltySpec
    penalty_v: PenaltySpec
    penalty_w: PenaltySpec

    def __post_init__(self):
        x, y = as_array(self.X), as_array(self.Y)
        if x.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"X has {x.shape[0]} samples but Y has {y.shape[0]}")
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)
        for name, length in (("penalty_u", x.shape[1]), ("penalty_v", y.shape[1]),
                             ("penalty_w", x.shape[0])):
            pen = as_penalty(getattr(self, name))
            pen.validate(length)
            object.__setattr__(self, name, pen)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    @property
    def q(self):
        return self.Y.shape[1]

    def penalized_objective(self, u, v, w) -> float:
        return (weighted_objective(self.X, self.Y, u, v, w)
                - self.penalty_u.value(u) - self.penalty_v.value(v) - self.penalty_w.value(w))


def _project(penalty, z, vector):
    if not np.all(np.isfinite(z)):
        raise NonFiniteValue(f"update of {vector} produced non-finite coefficients")
    try:
        return project(penalty, z)
    except ZeroProjection as exc:
        raise exc.located(vector=vector) from None


def update_u(problem: SwccaProblem, v, w) -> np.ndarray:
    z = problem.X.T @ ((problem.Y @ v) * w)
    return _project(problem.penalty_u, z, "u")


def update_v(problem: SwccaProblem, u, w) -> np.ndarray:
    z = problem.Y.T @ ((problem.X @ u) * w)
    return _project(problem.penalty_v, z, "v")


def update_w(problem: SwccaProblem, u, v) -> np.ndarray:
    z = (problem.X @ u) * (problem.Y @ v)
    return _project(problem.penalty_w, z, "w")


def random_start(penalty: PenaltySpec, rng: np.random.Generator, length: int) -> np.ndarray:
    """Normal draw projected onto the feasible set.

    Only the cardinality constraint is applied; shrinkage thresholds are
    scaled to the data, not to a unit normal draw, so lasso and group starts
    are just normalized.
    """
    x = rng.standard_normal(length)
    if isinstance(penalty, HardCardinality):
        return hard_project(x, penalty.k)
    return x / np.linalg.norm(x)


def _unit(x, length, name):
    x = np.asarray(x, dtype=float)
    if x.shape != (length,):
        raise DimensionMismatch(f"initial {name} has shape {x.shape}, expected ({length},)")
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise ConfigError(f"initial {name} is the zero vector")
    return x / nrm


def leading_singular_pair(X: np.ndarray, Y: np.ndarray):
    """Leading left/right singular vectors of ``X.T @ Y``."""
    U, _, Vt = np.linalg.svd(X.T @ Y, full_matrices=False)
    return U[:, 0], Vt[0]


def initial_vectors(problem: SwccaProblem, config: SolverConfig, seed: int):
    n, p, q = problem.n, problem.p, problem.q
    if config.init == "random":
        rng = np.random.default_rng(seed)
        u = random_start(problem.penalty_u, rng, p)
        v = random_start(problem.penalty_v, rng, q)
        w = random_start(problem.penalty_w, rng, n)
    elif config.init == "svd":
        a, b = leading_singular_pair(problem.X, problem.Y)
        u = _project(problem.penalty_u, a, "u")
        v = _project(problem.penalty_v, b, "v")
        # Left unprojected: top-k of a constant vector would select by index.
        w = np.full(n, 1.0 / np.sqrt(n))
    else:
        u0, v0, w0 = config.init_vectors
        u, v, w = _unit(u0, p, "u"), _unit(v0, q, "v"), _unit(w0, n, "w")
    if config.fixed_w is not None:
        w = np.asarray(config.fixed_w, dtype=float)
        if w.shape != (n,):
            raise DimensionMismatch(f"fixed_w has shape {w.shape}, expected ({n},)")
    return u, v, w


def _single_run(problem: SwccaProblem, config: SolverConfig, seed: int) -> SwccaFit:
    u, v, w = initial_vectors(problem, config, seed)
    frozen = config.fixed_w is not None
    trace = []
    history = [] if config.keep_history else None
    reason = "max_iters"
    it = 0
    for it in range(1, config.max_iters + 1):
        try:
            u_new = update_u(problem, v, w)
            v_new = update_v(problem, u_new, w)
            w_new = w if frozen else update_w(problem, u_new, v_new)
        except ZeroProjection as exc:
            raise exc.located(iteration=it) from None
        obj = problem.penalized_objective(u_new, v_new, w_new)
        if not np.isfinite(obj):
            raise NonFiniteValue(f"objective became {obj} at iteration {it}")
        trace.append(obj)
        du = float(np.sum((u_new - u) ** 2))
        dv = float(np.sum((v_new - v) ** 2))
        dw = float(np.sum((w_new - w) ** 2))
        u, v, w = u_new, v_new, w_new
        if history is not None:
            history.append((u, v, w))
        if du < config.delta_tol and dv < config.delta_tol and dw < config.delta_tol:
            reason = "delta_below_tol"
            break
        if (config.objective_tol > 0 and len(trace) > 1
                and abs(trace[-1] - trace[-2]) < config.objective_tol):
            reason = "objective_delta_below_tol"
            break
    return SwccaFit(u, v, w, trace, it, reason != "max_iters", reason, history=history)


def canonical_signs(u, w, frozen=False):
    """Flip ``(u, w)`` together so that ``sum(w) >= 0``.

    The objective is unchanged by this flip but the weighted correlation
    changes sign with it, so a convention is needed for reporting.
    """
    if not frozen and w.sum() < 0:
        return -u, -w
    return u, w


def fit(problem: SwccaProblem, config: SolverConfig | None = None) -> SwccaFit:
    """Run the alternating solver, keeping the best of ``config.restarts`` runs.

    Matrices are used as given; center or standardize them beforehand if
    desired.  Raises ``ZeroProjection`` if every restart degenerates.
    """
    config = config or SolverConfig()
    best = None
    first_error = None
    for r in range(config.restarts):
        try:
            result = _single_run(problem, config, config.seed + r)
        except ZeroProjection as exc:
            logger.debug("restart %d aborted: %s", r, exc)
            if first_error is None:
                first_error = exc
            continue
        result.restart = r
        if best is None or result.objective > best.objective:
            best = result
    if best is None:
        raise first_error
    best.u, best.w = canonical_signs(best.u, best.w, frozen=config.fixed_w is not None)
    return best
