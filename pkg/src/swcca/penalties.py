"""Lasso and group-lasso weighted CCA.

Both run the generic alternating loop of :mod:`swcca.solver`; only the
projection applied in each block changes.  The logged objective is the
penalized one, ``u^T X^T diag(w) Y v - R_u(u) - R_v(v) - R_w(w)``.
"""

from __future__ import annotations

from .core import GroupLasso, Lasso, SolverConfig, SwccaFit
from .errors import ConfigError
from .solver import SwccaProblem, fit


def _check_kinds(problem: SwccaProblem, kind, label):
    for name in ("penalty_u", "penalty_v", "penalty_w"):
        pen = getattr(problem, name)
        if not isinstance(pen, kind):
            raise ConfigError(f"{label} expects {kind.__name__} penalties, {name} is {pen!r}")


def lasso_problem(X, Y, lam_u: float, lam_v: float, lam_w: float) -> SwccaProblem:
    return SwccaProblem(X, Y, Lasso(lam_u), Lasso(lam_v), Lasso(lam_w))


def group_problem(X, Y, groups_u, groups_v, groups_w,
                  lam_u: float, lam_v: float, lam_w: float) -> SwccaProblem:
    return SwccaProblem(X, Y, GroupLasso(lam_u, groups_u), GroupLasso(lam_v, groups_v),
                        GroupLasso(lam_w, groups_w))


def fit_l1(problem: SwccaProblem, config: SolverConfig | None = None) -> SwccaFit:
    """L1-penalized fit: every block update is a normalized soft threshold.

    A weight at or above the largest ``|z_i|`` met during the run kills the
    block and raises ``ZeroProjection``.
    """
    _check_kinds(problem, Lasso, "fit_l1")
    return fit(problem, config)


def fit_group(problem: SwccaProblem, config: SolverConfig | None = None) -> SwccaFit:
    """Group-lasso fit: each group survives iff its ``z`` segment norm exceeds
    the weight, and survivors are shrunk toward zero before normalization."""
    _check_kinds(problem, GroupLasso, "fit_group")
    return fit(problem, config)
