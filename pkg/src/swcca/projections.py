"""Closed-form solutions of the per-block sub-problems.

Each sub-problem has the form ``max x.z - R(x)`` subject to ``||x||_2 = 1``.
For the cardinality constraint the maximizer keeps the ``k`` entries of ``z``
with largest magnitude; for the L1 and group penalties it is the matching
shrinkage of ``z`` followed by normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GroupLasso, HardCardinality, Lasso, PenaltySpec
from .errors import ConfigError, InvalidK, ZeroProjection

_SORT_CUTOFF = 64


@dataclass(frozen=True)
class TopKSelection:
    indices: np.ndarray  # ascending
    threshold_magnitude: float


def _kth_largest(a: np.ndarray, k: int) -> float:
    """k-th largest value of ``a`` (1-based) by quickselect.

    Median-of-three pivoting, three-way partition; short slices are sorted.
    """
    while True:
        n = a.size
        if n < _SORT_CUTOFF:
            return float(np.sort(a)[n - k])
        x, y, z = a[0], a[n // 2], a[-1]
        pivot = max(min(x, y), min(max(x, y), z))
        above = a[a > pivot]
        if k <= above.size:
            a = above
            continue
        n_equal = int(np.count_nonzero(a == pivot))
        if k <= above.size + n_equal:
            return float(pivot)
        k -= above.size + n_equal
        a = a[a < pivot]


def top_k_support(z, k: int) -> TopKSelection:
    """Indices of the ``k`` largest ``|z_i|``.

    Ties at the cut-off magnitude go to the lowest indices, so the result
    equals the first ``k`` entries of a stable sort on ``-|z|``.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {z.shape}")
    p = z.shape[0]
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= p:
        raise InvalidK(k, p)
    k = int(k)
    mag = np.abs(z)
    if not np.all(np.isfinite(mag)):
        raise ValueError("vector contains non-finite entries")
    t = _kth_largest(mag, k)
    strict = np.flatnonzero(mag > t)
    ties = np.flatnonzero(mag == t)[: k - strict.size]
    return TopKSelection(np.sort(np.concatenate([strict, ties])), t)


def _normalized(x: np.ndarray, what: str) -> np.ndarray:
    # Rescale by the largest entry first so tiny vectors do not underflow.
    peak = np.max(np.abs(x)) if x.size else 0.0
    if peak == 0.0:
        raise ZeroProjection(what)
    x = x / peak
    return x / np.linalg.norm(x)


def hard_threshold(z, k: int) -> np.ndarray:
    """Copy of ``z`` with all but its ``k`` largest-magnitude entries zeroed."""
    z = np.asarray(z, dtype=float)
    sel = top_k_support(z, k)
    out = np.zeros_like(z)
    out[sel.indices] = z[sel.indices]
    return out


def hard_project(z, k: int) -> np.ndarray:
    """Unit vector with at most ``k`` nonzeros maximizing ``u . z``."""
    return _normalized(hard_threshold(z, k), "top-k entries are all zero")


def soft_threshold(z, lam: float) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    return np.sign(z) * np.maximum(np.abs(z) - lam, 0.0)


def soft_threshold_project(z, lam: float) -> np.ndarray:
    """Normalized soft-thresholding of ``z`` at ``lam``."""
    if lam < 0:
        raise ConfigError(f"threshold must be nonnegative, got {lam}")
    return _normalized(soft_threshold(z, lam), f"soft threshold {lam} removes every entry")


def group_shrink_project(z, lam: float, groups) -> np.ndarray:
    """Groupwise shrinkage ``z_l (1 - lam/||z_l||)_+`` followed by normalization.

    Groups whose norm does not exceed ``lam`` are set exactly to zero.
    """
    if lam < 0:
        raise ConfigError(f"threshold must be nonnegative, got {lam}")
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    for g in groups:
        g = list(g)
        seg = z[g]
        nrm = np.linalg.norm(seg)
        if nrm > lam:
            out[g] = seg * (1.0 - lam / nrm)
    return _normalized(out, f"group threshold {lam} removes every group")


def project(penalty: PenaltySpec, z) -> np.ndarray:
    """Solve the sub-problem with coefficient vector ``z`` under ``penalty``."""
    if isinstance(penalty, HardCardinality):
        return hard_project(z, penalty.k)
    if isinstance(penalty, Lasso):
        return soft_threshold_project(z, penalty.lam)
    if isinstance(penalty, GroupLasso):
        return group_shrink_project(z, penalty.lam, penalty.groups)
    raise ConfigError(f"unsupported penalty {penalty!r}")
