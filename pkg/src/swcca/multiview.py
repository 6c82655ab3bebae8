"""Multi-view weighted CCA.

For views ``X_1..X_M`` sharing ``n`` samples the objective is
``w . prod_i(X_i u_i) - sum_i R_i(u_i) - R_w(w)``.  It is linear in each
``u_i`` with coefficients ``z_i = X_i^T [w * prod_{j != i} X_j u_j]`` and in
``w`` with coefficients ``prod_j X_j u_j``, so the same projections as the
two-view solver apply block by block.  With two views this is exactly the
two-view problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MatrixLike, PenaltySpec, SolverConfig, as_array
from .errors import ConfigError, DimensionMismatch, NonFiniteValue, ZeroProjection
from .solver import (
    _project,
    _unit,
    as_penalty,
    canonical_signs,
    leading_singular_pair,
    random_start,
)


@dataclass(frozen=True)
class MultiviewProblem:
    views: tuple
    penalties: tuple
    penalty_w: PenaltySpec

    def __post_init__(self):
        views = tuple(as_array(x) for x in self.views)
        if len(views) < 2:
            raise ConfigError(f"need at least two views, got {len(views)}")
        n = views[0].shape[0]
        for i, x in enumerate(views):
            if x.shape[0] != n:
                raise DimensionMismatch(f"view {i} has {x.shape[0]} samples, view 0 has {n}")
        if len(self.penalties) != len(views):
            raise ConfigError(f"{len(self.penalties)} penalties for {len(views)} views")
        pens = tuple(as_penalty(p) for p in self.penalties)
        for pen, x in zip(pens, views):
            pen.validate(x.shape[1])
        pw = as_penalty(self.penalty_w)
        pw.validate(n)
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "penalties", pens)
        object.__setattr__(self, "penalty_w", pw)

    @property
    def n(self):
        return self.views[0].shape[0]

    @property
    def m(self):
        return len(self.views)


@dataclass
class MultiviewFit:
    us: list
    w: np.ndarray
    objective_trace: list
    iterations: int
    converged: bool
    termination_reason: str
    restart: int = 0
    history: list | None = None

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def _projections(problem, us):
    if len(us) != problem.m:
        raise DimensionMismatch(f"{len(us)} loading vectors for {problem.m} views")
    out = []
    for i, (x, u) in enumerate(zip(problem.views, us)):
        u = np.asarray(u, dtype=float)
        if u.shape != (x.shape[1],):
            raise DimensionMismatch(f"u[{i}] has shape {u.shape}, expected ({x.shape[1]},)")
        out.append(x @ u)
    return out


def _product(ts, skip=None):
    prod = None
    for j, t in enumerate(ts):
        if j == skip:
            continue
        prod = t if prod is None else prod * t
    return prod


def multiview_objective(problem: MultiviewProblem, us, w) -> float:
    """``w . (X_1 u_1 * ... * X_M u_M)`` (unpenalized)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (problem.n,):
        raise DimensionMismatch(f"w has shape {w.shape}, expected ({problem.n},)")
    return float(w @ _product(_projections(problem, us)))


def _penalized(problem, us, w):
    return (multiview_objective(problem, us, w)
            - sum(pen.value(u) for pen, u in zip(problem.penalties, us))
            - problem.penalty_w.value(w))


def _initial(problem: MultiviewProblem, config: SolverConfig, seed: int):
    if config.init == "random":
        rng = np.random.default_rng(seed)
        us = [random_start(pen, rng, x.shape[1]) for pen, x in zip(problem.penalties, problem.views)]
        w = random_start(problem.penalty_w, rng, problem.n)
    elif config.init == "svd":
        if problem.m == 2:
            starts = leading_singular_pair(*problem.views)
        else:
            starts = [np.linalg.svd(x, full_matrices=False)[2][0] for x in problem.views]
        us = [_project(pen, a, f"u{i + 1}")
              for i, (pen, a) in enumerate(zip(problem.penalties, starts))]
        w = np.full(problem.n, 1.0 / np.sqrt(problem.n))
    else:
        *u0, w0 = config.init_vectors
        us = [_unit(u, x.shape[1], f"u{i + 1}") for i, (u, x) in enumerate(zip(u0, problem.views))]
        w = _unit(w0, problem.n, "w")
    if config.fixed_w is not None:
        w = np.asarray(config.fixed_w, dtype=float)
    return us, w


def _single_run(problem, config, seed):
    us, w = _initial(problem, config, seed)
    frozen = config.fixed_w is not None
    ts = _projections(problem, us)
    trace = []
    history = [] if config.keep_history else None
    reason = "max_iters"
    it = 0
    for it in range(1, config.max_iters + 1):
        new_us = list(us)
        try:
            for i, (x, pen) in enumerate(zip(problem.views, problem.penalties)):
                # Products are rebuilt each time; dividing out t_i would break on zeros.
                z = x.T @ (w * _product(ts, skip=i))
                new_us[i] = _project(pen, z, f"u{i + 1}")
                ts[i] = x @ new_us[i]
            new_w = w if frozen else _project(problem.penalty_w, _product(ts), "w")
        except ZeroProjection as exc:
            raise exc.located(iteration=it) from None
        obj = _penalized(problem, new_us, new_w)
        if not np.isfinite(obj):
            raise NonFiniteValue(f"objective became {obj} at iteration {it}")
        trace.append(obj)
        deltas = [float(np.sum((a - b) ** 2)) for a, b in zip(new_us, us)]
        deltas.append(float(np.sum((new_w - w) ** 2)))
        us, w = new_us, new_w
        if history is not None:
            history.append((tuple(us), w))
        if all(d < config.delta_tol for d in deltas):
            reason = "delta_below_tol"
            break
        if (config.objective_tol > 0 and len(trace) > 1
                and abs(trace[-1] - trace[-2]) < config.objective_tol):
            reason = "objective_delta_below_tol"
            break
    return MultiviewFit(us, w, trace, it, reason != "max_iters", reason, history=history)


def fit_multiview(problem: MultiviewProblem, config: SolverConfig | None = None) -> MultiviewFit:
    """Cycle ``u_1, ..., u_M`` then ``w`` until the iterates settle.

    Termination and restart semantics are those of :func:`swcca.solver.fit`.
    """
    config = config or SolverConfig()
    best = None
    first_error = None
    for r in range(config.restarts):
        try:
            result = _single_run(problem, config, config.seed + r)
        except ZeroProjection as exc:
            first_error = first_error or exc
            continue
        result.restart = r
        if best is None or result.objective > best.objective:
            best = result
    if best is None:
        raise first_error
    best.us[0], best.w = canonical_signs(best.us[0], best.w, frozen=config.fixed_w is not None)
    _align_middle_views(problem, best)
    return best


def _align_middle_views(problem, result):
    """Flip ``(u_i, u_M)`` so each middle view correlates non-negatively with view 1.

    The objective is unchanged by flipping two loadings together; without a
    convention the reported correlation between views 1 and 2 has a random sign.
    """
    ts = _projections(problem, result.us)
    a = ts[0] * result.w
    a = a - a.mean()
    for i in range(1, problem.m - 1):
        b = ts[i] * result.w
        if a @ (b - b.mean()) < 0:
            result.us[i] = -result.us[i]
            result.us[-1] = -result.us[-1]
