"""Command-line interface: ``swcca gen | fit | compare``.

Exit codes: 0 success, 2 configuration error, 3 data or I/O error,
4 solver degeneracy.  Values resolve as command-line flag, then
``--config`` JSON key, then built-in default.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .core import SolverConfig
from .datagen import GENERATORS
from .dsv import write_matrix
from .errors import ConfigError, DataError, SolverError, SwccaError
from .runs import METHODS, PREPROCESS, DataSource, RunManifest, execute, load_data

log = logging.getLogger("swcca")

EXIT_CONFIG, EXIT_DATA, EXIT_SOLVER = 2, 3, 4

DEFAULTS = {
    "seed": 0,
    "seeds": "0",
    "out": ".",
    "init": "random",
    "restarts": 1,
    "max_iters": 1000,
    "tol": 1e-6,
    "objective_tol": 0.0,
    "preprocess": "raw",
    "workers": 1,
    "plot_data": False,
    "pmd_standardize": True,
}

PARAM_KEYS = ("ku", "kv", "kw", "k_views", "lambda_u", "lambda_v", "lambda_w",
              "groups_u", "groups_v", "groups_w", "c", "c1", "c2", "pmd_standardize")


def _int_list(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def _c_value(text):
    vals = [float(t) for t in str(text).split(",")]
    if len(vals) not in (1, 2):
        raise argparse.ArgumentTypeError("expected one value or two comma-separated values")
    return vals[0] if len(vals) == 1 else vals


def _group_spec(text):
    try:
        return int(text)
    except ValueError:
        return text


def parse_seeds(text) -> list:
    """``"0-19"``, ``"1,4,7"`` or a mix such as ``"0-4,10"``."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(s) for s in text]
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = (int(x) for x in part.split("-", 1))
            if hi < lo:
                raise ConfigError(f"empty seed range {part!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ConfigError("no seeds given")
    return seeds


def _add_data_args(p):
    g = p.add_argument_group("data")
    g.add_argument("--synthetic", type=int, choices=sorted(GENERATORS),
                   help="use synthetic generator 1 or 2")
    g.add_argument("--files", nargs="+", metavar="PATH",
                   help="matrix files X Y [further views...]")
    g.add_argument("--truth", help="truth.json for support scoring of file input")
    g.add_argument("--preprocess", choices=PREPROCESS)


def _add_fit_args(p):
    g = p.add_argument_group("penalties")
    g.add_argument("--ku", type=int)
    g.add_argument("--kv", type=int)
    g.add_argument("--kw", type=int)
    g.add_argument("--k-views", dest="k_views", type=_int_list,
                   help="comma-separated cardinality per view (mswcca)")
    g.add_argument("--lambda-u", dest="lambda_u", type=float)
    g.add_argument("--lambda-v", dest="lambda_v", type=float)
    g.add_argument("--lambda-w", dest="lambda_w", type=float)
    for b in "uvw":
        g.add_argument(f"--groups-{b}", dest=f"groups_{b}", type=_group_spec,
                       help="contiguous block size, or a JSON file listing index groups")
    g.add_argument("--c", type=_c_value,
                   help="PMD sparsity fraction(s): radii c*sqrt(p), c*sqrt(q)")
    g.add_argument("--c1", type=float, help="PMD L1 radius for u (overrides --c)")
    g.add_argument("--c2", type=float, help="PMD L1 radius for v (overrides --c)")
    g.add_argument("--no-pmd-standardize", dest="pmd_standardize", action="store_const",
                   const=False, default=None)
    s = p.add_argument_group("solver")
    s.add_argument("--init", choices=("random", "svd"))
    s.add_argument("--restarts", type=int)
    s.add_argument("--max-iters", dest="max_iters", type=int)
    s.add_argument("--tol", type=float, help="squared update-length tolerance")
    s.add_argument("--objective-tol", dest="objective_tol", type=float)
    o = p.add_argument_group("output")
    o.add_argument("--out", help="output directory")
    o.add_argument("--config", help="JSON file of option defaults")
    o.add_argument("--plot-data", dest="plot_data", action="store_const", const=True,
                   default=None, help="also write long-format loading tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swcca", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic data set to matrix files")
    gen.add_argument("--synthetic", type=int, choices=sorted(GENERATORS), required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=".")
    gen.set_defaults(func=cmd_gen)

    fitp = sub.add_parser("fit", help="fit one method")
    fitp.add_argument("--method", choices=METHODS)
    fitp.add_argument("--seed", type=int)
    _add_data_args(fitp)
    _add_fit_args(fitp)
    fitp.set_defaults(func=cmd_fit)

    cmp_ = sub.add_parser("compare", help="fit several methods over several seeds")
    cmp_.add_argument("--methods", help="comma-separated method names")
    cmp_.add_argument("--seeds", help="seed list or range, e.g. 0-19")
    cmp_.add_argument("--workers", type=int)
    _add_data_args(cmp_)
    _add_fit_args(cmp_)
    cmp_.set_defaults(func=cmd_compare)
    return parser


def resolve(args) -> dict:
    """Merge flags over config-file keys over defaults."""
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            file_cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
        except ValueError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError(f"config {args.config} must hold a JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in file_cfg.items()}
    merged = dict(DEFAULTS)
    merged.update(file_cfg)
    for k, v in vars(args).items():
        if v is not None and k != "func":
            merged[k] = v
    return merged


def _source(opts, seed) -> DataSource:
    synthetic, files = opts.get("synthetic"), opts.get("files")
    if (synthetic is None) == (not files):
        raise ConfigError("choose exactly one data source: --synthetic N or --files X Y")
    if synthetic is not None:
        return DataSource("synthetic", generator=int(synthetic), seed=seed)
    return DataSource("files", paths=tuple(files), truth_path=opts.get("truth"))


def _solver(opts, seed) -> SolverConfig:
    return SolverConfig(init=opts["init"], seed=seed, max_iters=int(opts["max_iters"]),
                        delta_tol=float(opts["tol"]), objective_tol=float(opts["objective_tol"]),
                        restarts=int(opts["restarts"]))


def _manifest(opts, method, seed) -> RunManifest:
    params = {k: opts.get(k) for k in PARAM_KEYS}
    m = RunManifest(method, _source(opts, seed), params, _solver(opts, seed), opts["preprocess"])
    m.validate()
    return m


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, default=_json_default) + "\n", encoding="utf-8")


def _out_dir(opts) -> Path:
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args) -> int:
    X, Y, truth = GENERATORS[args.synthetic](args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(out / "X.csv", X, [f"x{j + 1}" for j in range(X.shape[1])])
    write_matrix(out / "Y.csv", Y, [f"y{j + 1}" for j in range(Y.shape[1])])
    d = truth.to_dict()
    d["generator"] = args.synthetic
    _write_json(out / "truth.json", d)
    log.info("wrote %s, %s and truth.json to %s", X.shape, Y.shape, out)
    return 0


def _plot_rows(vectors, truth):
    rows = []
    truths = {}
    if truth is not None:
        truths = {"u": truth.u_true, "v": truth.v_true, "w": truth.w_true}
    for name in ("u", "v", "w"):
        vec = vectors.get(name)
        if vec is not None:
            rows += [(name, i, "estimate", repr(float(x))) for i, x in enumerate(vec)]
        if name in truths:
            rows += [(name, i, "truth", repr(float(x))) for i, x in enumerate(truths[name])]
    return rows


def cmd_fit(args) -> int:
    opts = resolve(args)
    if opts.get("method") is None:
        raise ConfigError("--method is required")
    seed = int(opts["seed"])
    manifest = _manifest(opts, opts["method"], seed)
    data = load_data(manifest.source)
    record, vectors = execute(manifest, data)
    record["provenance"] = {
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "data_source": manifest.source.describe(),
        "version": __version__,
    }
    out = _out_dir(opts)
    _write_json(out / "results.json", record)
    with (out / "trace.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["iteration", "objective"])
        for i, val in enumerate(record["objective_trace"], start=1):
            w.writerow([i, repr(val)])
    if opts.get("plot_data"):
        with (out / "plot_data.csv").open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["vector", "index", "source", "value"])
            w.writerows(_plot_rows(vectors, data[1]))
    rho = record["correlation_level"]
    print(f"{record['method']}: objective={record['objective']:.6g} "
          f"correlation_level={rho if rho is None else round(rho, 4)} "
          f"iterations={record['iterations']} ({record['termination_reason']})")
    return 0


COMPARE_COLUMNS = ["method", "seed", "status", "correlation_level", "objective",
                   "f1_u", "f1_v", "f1_w", "iterations", "converged"]


def _compare_cell(task):
    """Run one (method, seed) cell; never raises."""
    method, seed, manifest = task
    row = {"method": method, "seed": seed}
    try:
        record, _ = execute(manifest)
    except SwccaError as exc:
        row["status"] = f"error: {type(exc).__name__}: {exc}"
        return row
    except OSError as exc:
        row["status"] = f"error: {exc}"
        return row
    rec = record.get("recovery", {})
    row.update(status="ok", correlation_level=record["correlation_level"],
               objective=record["objective"], iterations=record["iterations"],
               converged=record["converged"],
               f1_u=rec.get("u", {}).get("f1"), f1_v=rec.get("v", {}).get("f1"),
               f1_w=rec.get("w", {}).get("f1"))
    return row


def _mean(values):
    vals = [v for v in values if v is not None]
    return float(np.mean(vals)) if vals else None


def compare_rows(opts) -> list:
    methods = [m.strip() for m in str(opts.get("methods") or "").split(",") if m.strip()]
    if not methods:
        raise ConfigError("--methods is required")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
    seeds = parse_seeds(opts["seeds"])
    tasks = [(m, s, _manifest(opts, m, s)) for m in methods for s in seeds]
    workers = int(opts["workers"])
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_compare_cell, tasks))
    else:
        rows = [_compare_cell(t) for t in tasks]
    order = {m: i for i, m in enumerate(methods)}
    rows.sort(key=lambda r: (order[r["method"]], r["seed"]))
    out = []
    for m in methods:
        mine = [r for r in rows if r["method"] == m]
        out += mine
        ok = [r for r in mine if r["status"] == "ok"]
        agg = {"method": m, "seed": "mean", "status": f"{len(ok)}/{len(mine)} ok"}
        for col in ("correlation_level", "objective", "f1_u", "f1_v", "f1_w", "iterations"):
            agg[col] = _mean([r.get(col) for r in ok])
        out.append(agg)
    return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cmd_compare(args) -> int:
    opts = resolve(args)
    rows = compare_rows(opts)
    out = _out_dir(opts)
    with (out / "compare.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPARE_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r.get(c)) for c in COMPARE_COLUMNS])
    for r in rows:
        if r["seed"] == "mean":
            rho = r["correlation_level"]
            print(f"{r['method']:>12}  mean correlation_level="
                  f"{'n/a' if rho is None else f'{rho:.4f}'}  ({r['status']})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"swcca: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"swcca: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"swcca: I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverError as exc:
        print(f"swcca: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def run():
    sys.exit(main())
