"""Domain types, preprocessing and objective evaluation.

Matrices follow the samples-by-variables convention: ``X`` is ``n x p`` and
``Y`` is ``n x q``.  Canonical vectors are plain 1-D float arrays; a returned
vector always has unit Euclidean norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

import numpy as np

from .errors import (
    ConfigError,
    ConstantColumn,
    DataError,
    DegenerateVariance,
    DimensionMismatch,
    InvalidK,
)

Preprocessing = Literal["raw", "column-centered", "column-standardized"]
TerminationReason = Literal["delta_below_tol", "objective_delta_below_tol", "max_iters"]


@dataclass(frozen=True)
class DataMatrix:
    """Dense samples-by-variables matrix with its preprocessing state.

    The stored array is a read-only copy so instances can be shared freely.
    """

    values: np.ndarray
    preprocessing: Preprocessing = "raw"

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise DataError(f"expected a 2-D matrix, got shape {values.shape}")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"empty matrix of shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise DataError(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        if self.preprocessing not in ("raw", "column-centered", "column-standardized"):
            raise DataError(f"unknown preprocessing state {self.preprocessing!r}")
        if self.preprocessing != "raw":
            scale = np.maximum(np.abs(values).max(axis=0), 1.0)
            if np.any(np.abs(values.mean(axis=0)) > 1e-9 * scale):
                raise DataError(f"matrix flagged {self.preprocessing} has nonzero column means")
        if self.preprocessing == "column-standardized" and values.shape[0] > 1:
            if np.any(np.abs(values.std(axis=0, ddof=1) - 1.0) > 1e-6):
                raise DataError("matrix flagged column-standardized has non-unit column sd")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


MatrixLike = Union[DataMatrix, np.ndarray, Sequence[Sequence[float]]]


def as_array(m: MatrixLike) -> np.ndarray:
    """Return the underlying 2-D float array of ``m``."""
    if isinstance(m, DataMatrix):
        return m.values
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise DataError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def center_columns(m: MatrixLike) -> DataMatrix:
    """Subtract each column's mean."""
    if isinstance(m, DataMatrix) and m.preprocessing != "raw":
        raise DataError(f"cannot center a {m.preprocessing} matrix")
    x = as_array(m)
    return DataMatrix(x - x.mean(axis=0), "column-centered")


def standardize_columns(m: MatrixLike) -> DataMatrix:
    """Center each column and scale it to unit sample standard deviation.

    The sample convention (``ddof=1``) is used.  Standardizing an already
    standardized matrix returns it unchanged up to rounding.
    """
    x = as_array(m)
    if x.shape[0] < 2:
        raise DataError("standardization needs at least two samples")
    centered = x - x.mean(axis=0)
    sd = centered.std(axis=0, ddof=1)
    # Relative cut so that columns like [5, 5, 5] + rounding still count as constant.
    scale = np.maximum(np.abs(x).max(axis=0), 1.0)
    constant = np.flatnonzero(sd <= 1e-12 * scale)
    if constant.size:
        raise ConstantColumn(int(constant[0]))
    return DataMatrix(centered / sd, "column-standardized")


# Penalty specifications.  Projection onto each lives in ``projections``.


@dataclass(frozen=True)
class HardCardinality:
    """At most ``k`` nonzero entries."""

    k: int

    def validate(self, length: int) -> None:
        if isinstance(self.k, bool) or int(self.k) != self.k or not 1 <= self.k <= length:
            raise InvalidK(self.k, length)

    def value(self, x: np.ndarray) -> float:
        # The constraint is enforced by projection; it costs nothing in the objective.
        return 0.0


@dataclass(frozen=True)
class Lasso:
    """``lam * ||x||_1``."""

    lam: float

    def validate(self, length: int) -> None:
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ConfigError(f"lasso weight must be a finite nonnegative number, got {self.lam}")

    def value(self, x: np.ndarray) -> float:
        return float(self.lam * np.abs(x).sum())


@dataclass(frozen=True)
class GroupLasso:
    """``lam * sum_l ||x[group_l]||_2`` over a partition of the indices."""

    lam: float
    groups: tuple = field(default=())

    def __post_init__(self):
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        object.__setattr__(self, "groups", groups)

    @classmethod
    def contiguous(cls, lam: float, length: int, size: int) -> "GroupLasso":
        """Blocks ``[0, size), [size, 2*size), ...`` covering ``length`` indices."""
        if size < 1:
            raise ConfigError(f"group size must be positive, got {size}")
        return cls(lam, tuple(tuple(range(s, min(s + size, length)))
                              for s in range(0, length, size)))

    def validate(self, length: int) -> None:
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ConfigError(f"group lasso weight must be a finite nonnegative number, got {self.lam}")
        if not self.groups:
            raise ConfigError("group lasso needs at least one group")
        seen = np.zeros(length, dtype=bool)
        for g in self.groups:
            if not g:
                raise ConfigError("empty group in partition")
            for i in g:
                if not 0 <= i < length:
                    raise ConfigError(f"group index {i} out of range for length {length}")
                if seen[i]:
                    raise ConfigError(f"index {i} appears in more than one group")
                seen[i] = True
        if not seen.all():
            raise ConfigError(f"groups do not cover index {int(np.flatnonzero(~seen)[0])}")

    def value(self, x: np.ndarray) -> float:
        return float(self.lam * sum(np.linalg.norm(x[list(g)]) for g in self.groups))


PenaltySpec = Union[HardCardinality, Lasso, GroupLasso]


@dataclass(frozen=True)
class SolverConfig:
    """Settings for the alternating solvers.

    ``init`` is one of ``"random"`` (i.i.d. normal draws from ``seed``,
    projected through each penalty), ``"svd"`` (leading singular vectors of
    ``X.T @ Y`` and a uniform ``w``) or ``"supplied"`` (``init_vectors``).
    Restart ``r`` uses ``seed + r``.

    ``fixed_w`` pins the sample weights for the whole run; with a uniform
    vector this turns the solver into plain L0-SCCA.
    """

    init: Literal["random", "svd", "supplied"] = "random"
    seed: int = 0
    init_vectors: tuple | None = None
    max_iters: int = 1000
    delta_tol: float = 1e-6
    objective_tol: float = 0.0
    restarts: int = 1
    fixed_w: np.ndarray | None = None
    keep_history: bool = False

    def __post_init__(self):
        if self.init not in ("random", "svd", "supplied"):
            raise ConfigError(f"unknown init policy {self.init!r}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ConfigError(f"max_iters must be a positive integer, got {self.max_iters}")
        if self.delta_tol < 0 or self.objective_tol < 0:
            raise ConfigError("tolerances must be nonnegative")
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise ConfigError(f"restarts must be a positive integer, got {self.restarts}")
        if self.restarts > 1 and self.init != "random":
            raise ConfigError("restarts > 1 requires random initialization")
        if self.init == "supplied" and self.init_vectors is None:
            raise ConfigError("init='supplied' needs init_vectors")

    def to_dict(self) -> dict:
        return {
            "init": self.init,
            "seed": self.seed,
            "max_iters": self.max_iters,
            "delta_tol": self.delta_tol,
            "objective_tol": self.objective_tol,
            "restarts": self.restarts,
            "fixed_w": self.fixed_w is not None,
        }


@dataclass
class SwccaFit:
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    objective_trace: list
    iterations: int
    converged: bool
    termination_reason: TerminationReason
    restart: int = 0
    history: list | None = None

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def _vec(x, length, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != length:
        raise DimensionMismatch(f"{name} has shape {x.shape}, expected ({length},)")
    return x


def weighted_objective(X: MatrixLike, Y: MatrixLike, u, v, w) -> float:
    """``sum_i w_i (Xu)_i (Yv)_i``, i.e. ``u^T X^T diag(w) Y v``.

    Evaluated as ``u . X^T[(Yv) * w]`` so the cost is O(np + nq).
    """
    x, y = as_array(X), as_array(Y)
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} rows but Y has {y.shape[0]}")
    n, p = x.shape
    u = _vec(u, p, "u")
    v = _vec(v, y.shape[1], "v")
    w = _vec(w, n, "w")
    return float(u @ (x.T @ ((y @ v) * w)))


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise DegenerateVariance("correlation undefined for a constant vector")
    return float(np.clip((a @ b) / (na * nb), -1.0, 1.0))


def correlation_level(X: MatrixLike, Y: MatrixLike, u, v, w=None) -> float:
    """Pearson correlation of ``(Xu) * w`` and ``(Yv) * w``.

    ``w=None`` stands for the all-ones vector, which is how methods without
    sample weights are scored.
    """
    x, y = as_array(X), as_array(Y)
    if x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has {x.shape[0]} rows but Y has {y.shape[0]}")
    n = x.shape[0]
    w = np.ones(n) if w is None else _vec(w, n, "w")
    a = (x @ _vec(u, x.shape[1], "u")) * w
    b = (y @ _vec(v, y.shape[1], "v")) * w
    return pearson(a, b)
