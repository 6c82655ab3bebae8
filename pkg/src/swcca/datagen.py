"""Planted synthetic benchmarks and support-recovery scoring.

Both generators produce ``X`` of shape 50 x 100 and ``Y`` of shape 50 x 80.
Randomness comes from NumPy's PCG64 seeded through ``SeedSequence(seed)``;
each random array draws from its own spawned child stream, so outputs are
reproducible across platforms and adding a stream never perturbs the others.

Index ranges are 0-based and half-open: the "first 30 samples" are rows
``0..29``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_SAMPLES, P_VARS, Q_VARS = 50, 100, 80


@dataclass(frozen=True)
class SyntheticTruth:
    u_true: np.ndarray
    v_true: np.ndarray
    w_true: np.ndarray
    seed: int

    @property
    def support_u(self) -> np.ndarray:
        return np.flatnonzero(self.u_true)

    @property
    def support_v(self) -> np.ndarray:
        return np.flatnonzero(self.v_true)

    @property
    def support_w(self) -> np.ndarray:
        return np.flatnonzero(self.w_true)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "u_true": self.u_true.tolist(),
            "v_true": self.v_true.tolist(),
            "w_true": self.w_true.tolist(),
            "support_u": self.support_u.tolist(),
            "support_v": self.support_v.tolist(),
            "support_w": self.support_w.tolist(),
        }


def _streams(seed: int, count: int):
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def generate_synthetic_1(seed: int, noise_scale: float = 1.0):
    """Rank-one planted model ``X = w u^T + E_x``, ``Y = w v^T + E_y``.

    ``u`` is 1 on its first 30 entries, ``w`` is 1 on the first 30 samples,
    and ``v`` carries standard-normal values on entries 0..19 and 40..49.
    Streams: 0 for the values of ``v``, 1 for ``E_x``, 2 for ``E_y``.
    """
    rv, rx, ry = _streams(seed, 3)
    u = np.zeros(P_VARS)
    u[:30] = 1.0
    vals = rv.standard_normal(30)
    v = np.zeros(Q_VARS)
    v[:20] = vals[:20]
    v[40:50] = vals[20:]
    w = np.zeros(N_SAMPLES)
    w[:30] = 1.0
    X = np.outer(w, u) + noise_scale * rx.standard_normal((N_SAMPLES, P_VARS))
    Y = np.outer(w, v) + noise_scale * ry.standard_normal((N_SAMPLES, Q_VARS))
    return X, Y, SyntheticTruth(u, v, w, seed)


def generate_synthetic_2(seed: int, noise_scale: float = 1.0):
    """Block model: ``X[0:30, 0:50] = 1``, ``Y[0:30, 0:40] = -1``, plus unit noise.

    The reference loadings are ``u = 1`` on 0..49, ``v = -1`` on 0..39 and
    ``w = 1`` on samples 0..29.  Streams: 0 for ``E_x``, 1 for ``E_y``.
    """
    rx, ry = _streams(seed, 2)
    X = np.zeros((N_SAMPLES, P_VARS))
    Y = np.zeros((N_SAMPLES, Q_VARS))
    X[:30, :50] = 1.0
    Y[:30, :40] = -1.0
    X += noise_scale * rx.standard_normal(X.shape)
    Y += noise_scale * ry.standard_normal(Y.shape)
    u = np.r_[np.ones(50), np.zeros(50)]
    v = np.r_[-np.ones(40), np.zeros(40)]
    w = np.r_[np.ones(30), np.zeros(20)]
    return X, Y, SyntheticTruth(u, v, w, seed)


GENERATORS = {1: generate_synthetic_1, 2: generate_synthetic_2}


def support_recovery(estimated, truth_support):
    """Precision, recall and F1 of ``nonzero(estimated)`` against ``truth_support``.

    Two empty sets count as a perfect match; otherwise an empty side scores 0.
    """
    est = set(np.flatnonzero(np.asarray(estimated)).tolist())
    true = set(int(i) for i in truth_support)
    if not est and not true:
        return 1.0, 1.0, 1.0
    tp = len(est & true)
    precision = tp / len(est) if est else 0.0
    recall = tp / len(true) if true else 0.0
    if tp == 0:
        return precision, recall, 0.0
    return precision, recall, 2 * precision * recall / (precision + recall)
