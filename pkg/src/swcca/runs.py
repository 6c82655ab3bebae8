"""Run manifests: which method, on what data, with which parameters.

A manifest is executed into a JSON-ready result record.  The CLI builds
manifests from flags and config files; tests can build them directly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import PmdConfig, fit_l0_scca, fit_pmd
from .core import (
    GroupLasso,
    HardCardinality,
    Lasso,
    SolverConfig,
    center_columns,
    correlation_level,
    standardize_columns,
)
from .datagen import GENERATORS, SyntheticTruth, support_recovery
from .dsv import read_matrix
from .errors import ConfigError, DataError, DegenerateVariance
from .multiview import MultiviewProblem, fit_multiview
from .solver import SwccaProblem, fit

METHODS = ("l0_swcca", "l1_swcca", "group_swcca", "mswcca", "l0_scca", "pmd")
WEIGHTED = ("l0_swcca", "l1_swcca", "group_swcca", "mswcca")

_REQUIRED = {
    "l0_swcca": ("ku", "kv", "kw"),
    "l1_swcca": ("lambda_u", "lambda_v", "lambda_w"),
    "group_swcca": ("lambda_u", "lambda_v", "lambda_w", "groups_u", "groups_v", "groups_w"),
    "mswcca": ("kw",),
    "l0_scca": ("ku", "kv"),
    "pmd": (),
}
PREPROCESS = ("raw", "center", "standardize")


@dataclass(frozen=True)
class DataSource:
    kind: str  # "synthetic" or "files"
    generator: int | None = None
    seed: int | None = None
    paths: tuple = ()
    truth_path: str | None = None

    def validate(self):
        if self.kind == "synthetic":
            if self.generator not in GENERATORS:
                raise ConfigError(f"unknown synthetic generator {self.generator!r}; choose 1 or 2")
            if self.seed is None:
                raise ConfigError("synthetic data needs a seed")
        elif self.kind == "files":
            if len(self.paths) < 2:
                raise ConfigError("file input needs at least X and Y paths")
        else:
            raise ConfigError(f"unknown data source {self.kind!r}")

    def describe(self) -> dict:
        if self.kind == "synthetic":
            return {"kind": "synthetic", "generator": self.generator, "seed": self.seed}
        return {"kind": "files", "paths": [str(p) for p in self.paths],
                "truth": self.truth_path}


@dataclass(frozen=True)
class RunManifest:
    method: str
    source: DataSource
    params: dict = field(default_factory=dict)
    solver: SolverConfig = field(default_factory=SolverConfig)
    preprocess: str = "raw"

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        self.source.validate()
        missing = [k for k in _REQUIRED[self.method] if self.params.get(k) is None]
        if self.method == "pmd" and self.params.get("c") is None and (
                self.params.get("c1") is None or self.params.get("c2") is None):
            missing.append("c (or c1 and c2)")
        if self.method == "mswcca" and self.params.get("k_views") is None and (
                self.params.get("ku") is None or self.params.get("kv") is None):
            missing.append("k_views (or ku and kv)")
        if missing:
            raise ConfigError(f"method {self.method} requires: {', '.join(missing)}")
        if self.preprocess not in PREPROCESS:
            raise ConfigError(f"unknown preprocessing {self.preprocess!r}")

    def config_echo(self) -> dict:
        params = {k: v for k, v in sorted(self.params.items()) if v is not None}
        return {"method": self.method, "params": params, "solver": self.solver.to_dict(),
                "preprocess": self.preprocess}


def load_truth(path) -> SyntheticTruth:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
        return SyntheticTruth(np.asarray(d["u_true"], float), np.asarray(d["v_true"], float),
                              np.asarray(d["w_true"], float), d.get("seed"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed truth file ({exc})") from None


def load_data(source: DataSource):
    """Return ``(views, truth)``; ``views[0]`` is X and ``views[1]`` is Y."""
    if source.kind == "synthetic":
        X, Y, truth = GENERATORS[source.generator](source.seed)
        return [X, Y], truth
    views = [read_matrix(p)[0] for p in source.paths]
    n = views[0].shape[0]
    for p, v in zip(source.paths, views):
        if v.shape[0] != n:
            raise DataError(f"{p}: {v.shape[0]} rows, but {source.paths[0]} has {n}")
    truth = load_truth(source.truth_path) if source.truth_path else None
    return views, truth


def _preprocess(views, how):
    if how == "center":
        return [center_columns(v).values for v in views]
    if how == "standardize":
        return [standardize_columns(v).values for v in views]
    return views


def _groups(spec, length):
    if isinstance(spec, (int, np.integer)):
        return GroupLasso.contiguous(0.0, length, int(spec)).groups
    if isinstance(spec, (str, Path)):
        try:
            spec = json.loads(Path(spec).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read group file {spec}: {exc}") from None
    return tuple(tuple(g) for g in spec)


def sparse_map(x) -> dict:
    """Nonzero entries as ``{"index": value}``."""
    x = np.asarray(x)
    return {str(int(i)): float(x[i]) for i in np.flatnonzero(x)}


def _recovery(vec, support):
    pr, rc, f1 = support_recovery(vec, support)
    return {"precision": pr, "recall": rc, "f1": f1}


def _safe_correlation(X, Y, u, v, w):
    try:
        return correlation_level(X, Y, u, v, w)
    except DegenerateVariance:
        return None


def execute(manifest: RunManifest, data=None):
    """Fit the manifest's method; returns ``(record, dense_vectors)``.

    ``data`` may carry preloaded ``(views, truth)`` so several manifests can
    share one load.
    """
    manifest.validate()
    views, truth = data if data is not None else load_data(manifest.source)
    views = _preprocess(views, manifest.preprocess)
    X, Y = views[0], views[1]
    n, p, q = X.shape[0], X.shape[1], Y.shape[1]
    P = manifest.params
    cfg = manifest.solver
    method = manifest.method
    w = None
    us = None

    if method in ("l0_swcca", "l1_swcca", "group_swcca"):
        if method == "l0_swcca":
            pens = [HardCardinality(int(P["ku"])), HardCardinality(int(P["kv"])),
                    HardCardinality(int(P["kw"]))]
        elif method == "l1_swcca":
            pens = [Lasso(float(P["lambda_u"])), Lasso(float(P["lambda_v"])),
                    Lasso(float(P["lambda_w"]))]
        else:
            pens = [GroupLasso(float(P[f"lambda_{b}"]), _groups(P[f"groups_{b}"], dim))
                    for b, dim in (("u", p), ("v", q), ("w", n))]
        res = fit(SwccaProblem(X, Y, *pens), cfg)
        u, v, w = res.u, res.v, res.w
    elif method == "mswcca":
        k_views = P.get("k_views") or [P["ku"], P["kv"]]
        if len(k_views) != len(views):
            raise ConfigError(f"k_views has {len(k_views)} entries for {len(views)} views")
        res = fit_multiview(MultiviewProblem(views, [int(k) for k in k_views], int(P["kw"])), cfg)
        us, w = res.us, res.w
        u, v = us[0], us[1]
    elif method == "l0_scca":
        res = fit_l0_scca(X, Y, int(P["ku"]), int(P["kv"]), cfg)
        u, v = res.u, res.v
    else:
        c1, c2 = P.get("c1"), P.get("c2")
        if c1 is None or c2 is None:
            c = P["c"]
            cu, cv = (c, c) if np.isscalar(c) else c
            c1, c2 = cu * np.sqrt(p), cv * np.sqrt(q)
        res = fit_pmd(X, Y, PmdConfig(float(c1), float(c2), max_iters=cfg.max_iters,
                                      standardize=P.get("pmd_standardize", True)))
        u, v = res.u, res.v

    record = {
        "method": method,
        "seed": cfg.seed,
        "n": n, "p": p, "q": q,
        "config": manifest.config_echo(),
        "u": sparse_map(u),
        "v": sparse_map(v),
        "w": sparse_map(w) if w is not None else None,
        "cardinality": {"u": int(np.count_nonzero(u)), "v": int(np.count_nonzero(v)),
                        "w": int(np.count_nonzero(w)) if w is not None else None},
        "objective": res.objective,
        "objective_trace": list(res.objective_trace),
        # Methods without sample weights are scored with w = 1.
        "correlation_level": _safe_correlation(X, Y, u, v, w),
        "iterations": res.iterations,
        "converged": res.converged,
        "termination_reason": res.termination_reason,
        "restart": res.restart,
    }
    if method == "pmd":
        record["pmd_radii"] = {"c1": float(c1), "c2": float(c2)}
    if us is not None:
        record["us"] = [sparse_map(x) for x in us]
    if truth is not None:
        record["recovery"] = {"u": _recovery(u, truth.support_u), "v": _recovery(v, truth.support_v)}
        if w is not None:
            record["recovery"]["w"] = _recovery(w, truth.support_w)
    return record, {"u": u, "v": v, "w": w}
