"""Validation-split hyperparameter search, repetition loops, and reports.

``grid_search`` fits every grid point on the training rows (warm-starting
each fit from the previous point's solution) and scores on the validation
rows.  ``run_repetitions`` repeats the whole pipeline with derived seeds
and aggregates the test metrics.  ``emit_table`` writes three artifacts:

* ``report.csv``   -- metrics x methods table of "mean±std" cells
* ``report.json``  -- full per-repetition detail plus the run config
* ``profile.csv``  -- coefficient profiles (truth and per-method
  estimates from repetition 0) for stem plots

Every number in a report is a pure function of (source, grids, config,
master seed), so rerunning a benchmark reproduces the files byte for byte.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .data import (
    ClassificationSpec,
    Dataset,
    SyntheticSpec,
    generate_grouped_classification,
    generate_synthetic,
    normalize_dataset,
    split_dataset,
)
from .metrics import METRIC_NAMES, cla, compute_report, nnz
from .regularizers import ElasticNet, Lasso, Oscar, Sparc
from .solver import (
    Objective,
    SolverConfig,
    SolverDivergenceError,
    sparsa_solve,
)

__all__ = [
    "METHOD_NAMES",
    "TABLE_METRICS",
    "GridSpec",
    "BenchmarkReport",
    "default_grids",
    "grid_search",
    "run_repetitions",
    "emit_table",
    "load_report",
]

METHOD_NAMES = ("lasso", "enet", "oscar", "sparc")

# metric rows shown in report.csv, per task
TABLE_METRICS = {
    "regression": ("MAE", "MSE", "DoF", "SER"),
    "classification": ("CLA", "DoF", "NNZ"),
}

_METHOD_CLASS = {
    "lasso": Lasso,
    "enet": ElasticNet,
    "oscar": Oscar,
    "sparc": Sparc,
}

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GridSpec:
    """Per-method hyperparameter grids, each a tuple of regularizers."""

    lasso: tuple = ()
    enet: tuple = ()
    oscar: tuple = ()
    sparc: tuple = ()

    def __post_init__(self):
        for name in METHOD_NAMES:
            grid = tuple(getattr(self, name))
            for reg in grid:
                if not isinstance(reg, _METHOD_CLASS[name]):
                    raise TypeError(
                        f"{name} grid holds {type(reg).__name__}, "
                        f"expected {_METHOD_CLASS[name].__name__}"
                    )
            object.__setattr__(self, name, grid)

    def grid_for(self, method):
        if method not in METHOD_NAMES:
            raise ValueError(f"unknown method {method!r}")
        return getattr(self, method)


def default_grids(p, lam_grid=None, k_grid=None):
    """Grids spanning under- to over-regularized regimes.

    The scalar penalties share a 10-point logarithmic grid from 1e-3 to
    10; two-parameter methods take the full product.  The sparsity levels
    default to {5, 10, 15, 20, 25} filtered to k <= p.

    Grid order is part of the design: every axis sweeps from strong to
    weak regularization, so warm starts follow the usual continuation
    path.  The k-sparse grid is penalty-major with k decreasing inside,
    which warm-starts each support size from the same-penalty solution
    one size up; projecting a good larger support down is far more
    reliable than growing one, and it is what lets the solver escape bad
    support basins of the nonconvex constraint.
    """
    if lam_grid is None:
        lam_grid = np.logspace(-3, 1, 10)
    lam = tuple(sorted((float(v) for v in np.asarray(lam_grid, dtype=float)),
                       reverse=True))
    if not lam:
        raise ValueError("empty penalty grid")
    if k_grid is None:
        k_grid = (5, 10, 15, 20, 25)
    ks = tuple(sorted((int(k) for k in k_grid if 1 <= int(k) <= p),
                      reverse=True))
    if not ks:
        ks = (int(p),)
    return GridSpec(
        lasso=tuple(Lasso(l) for l in lam),
        enet=tuple(ElasticNet(l1, l2) for l1 in lam for l2 in lam),
        oscar=tuple(Oscar(l1, l2) for l1 in lam for l2 in lam),
        sparc=tuple(Sparc(l, k) for l in lam for k in ks),
    )


def grid_search(ds, grid, config=None):
    """Select the grid point with the best validation score.

    Fits on train rows only.  Scores: regression by the sum of squared
    validation prediction errors (lower wins), classification by
    validation accuracy (higher wins).  Ties go to the sparser solution,
    then to the earlier grid point.  Returns (regularizer, coefficients).

    Duplicate grid points are served from a cache, so they reuse the
    earlier solution verbatim and can never displace it.
    """
    grid = tuple(grid)
    if not grid:
        raise ValueError("hyperparameter grid is empty")
    A_tr, y_tr = ds.part("train")
    A_val, y_val = ds.part("validation")
    if A_tr.shape[0] == 0 or A_val.shape[0] == 0:
        raise ValueError("train and validation splits must be non-empty")
    cfg = config if config is not None else SolverConfig()

    cache = {}
    x_warm = None
    best = None  # (score, nnz, index, reg, coefficients)
    for idx, reg in enumerate(grid):
        if reg in cache:
            e = cache[reg]
        else:
            res = sparsa_solve(Objective(A_tr, y_tr, reg), x0=x_warm,
                               config=cfg)
            e = res.x
            cache[reg] = e
        x_warm = e
        if ds.task == "classification":
            score = -cla(A_val, y_val, e)
        else:
            r = A_val @ e - y_val
            score = float(r @ r)
        k = nnz(e)
        if best is None or score < best[0] or (score == best[0]
                                               and k < best[1]):
            best = (score, k, idx, reg, e)
    return best[3], best[4]


def _reg_to_dict(reg):
    if isinstance(reg, Lasso):
        return {"type": "lasso", "lam1": reg.lam1}
    if isinstance(reg, ElasticNet):
        return {"type": "enet", "lam1": reg.lam1, "lam2": reg.lam2}
    if isinstance(reg, Oscar):
        return {"type": "oscar", "lam1": reg.lam1, "lam2": reg.lam2}
    if isinstance(reg, Sparc):
        return {"type": "sparc", "lam": reg.lam, "k": reg.k}
    raise TypeError(f"unknown regularizer {reg!r}")


def _source_config(source):
    if isinstance(source, SyntheticSpec):
        return {"kind": "synthetic-regression", **asdict(source)}
    if isinstance(source, ClassificationSpec):
        return {"kind": "synthetic-classification", **asdict(source)}
    return {"kind": "dataset", "n": int(source.n), "p": int(source.p),
            "task": source.task}


def _materialize(source, seed, fractions, normalization):
    """One repetition's dataset: regenerate synthetic data or re-split."""
    if isinstance(source, SyntheticSpec):
        return generate_synthetic(replace(source, seed=seed))
    if isinstance(source, ClassificationSpec):
        return generate_grouped_classification(replace(source, seed=seed))
    if isinstance(source, Dataset):
        ds = split_dataset(source, fractions, seed)
        ds, _ = normalize_dataset(ds, normalization)
        return ds
    raise TypeError(f"unsupported source {type(source).__name__}")


def _one_repetition(source, grids, cfg, methods, fractions, normalization,
                    average, seed, keep_estimates):
    ds = _materialize(source, seed, fractions, normalization)
    cells = {}
    for method in methods:
        try:
            reg, e = grid_search(ds, grids.grid_for(method), cfg)
            report = compute_report(ds, e, average=average)
            est = [float(v) for v in e] if keep_estimates else None
            cells[method] = {
                "params": _reg_to_dict(reg),
                "metrics": report.to_dict(),
                "estimate": est,
                "error": None,
            }
        except SolverDivergenceError as exc:
            cells[method] = {
                "params": None,
                "metrics": None,
                "estimate": None,
                "error": f"{type(exc).__name__}: {exc}",
            }
    truth = None
    if keep_estimates:
        truth = ([float(v) for v in ds.x_true]
                 if ds.x_true is not None else None)
    return {"cells": cells, "truth": truth, "p": int(ds.p)}


@dataclass(frozen=True)
class BenchmarkReport:
    """Aggregated benchmark results in plain JSON-ready types."""

    task: str
    methods: list
    repetitions: int
    master_seed: int
    metric_names: list
    summary: dict          # method -> {"mean": {...}, "std": {...},
                           #            "failures": int}
    selected: dict         # method -> [params dict or None per rep]
    per_repetition: dict   # method -> [metrics dict or None per rep]
    errors: dict           # method -> [None or message per rep]
    profile: dict          # {"index", "true", "estimates": {method: [...]}}
    config: dict
    schema_version: int = SCHEMA_VERSION

    def to_json_dict(self):
        return {
            "schema_version": self.schema_version,
            "task": self.task,
            "methods": self.methods,
            "repetitions": self.repetitions,
            "master_seed": self.master_seed,
            "metric_names": self.metric_names,
            "summary": self.summary,
            "selected": self.selected,
            "per_repetition": self.per_repetition,
            "errors": self.errors,
            "profile": self.profile,
            "config": self.config,
        }

    @classmethod
    def from_json_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported report schema {d.get('schema_version')!r}"
            )
        return cls(**{k: d[k] for k in (
            "task", "methods", "repetitions", "master_seed", "metric_names",
            "summary", "selected", "per_repetition", "errors", "profile",
            "config",
        )}, schema_version=d["schema_version"])


def run_repetitions(source, grids, config=None, repetitions=50,
                    master_seed=0, methods=METHOD_NAMES,
                    fractions=(0.5, 0.3, 0.2), normalization="l2",
                    average=False, threads=1):
    """Run the benchmark ``repetitions`` times and aggregate test metrics.

    Repetition r uses seed ``master_seed + r`` to regenerate synthetic
    data (or to re-split and re-normalize a fixed Dataset source).  A
    solver failure marks that (method, repetition) cell as failed and the
    loop continues; failed cells are excluded from the mean/std but stay
    visible in the report.  With ``threads > 1`` repetitions run
    concurrently; results are assembled in repetition order either way,
    so the report does not depend on the thread count.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    methods = tuple(methods)
    for m in methods:
        if m not in METHOD_NAMES:
            raise ValueError(f"unknown method {m!r}")
        if not grids.grid_for(m):
            raise ValueError(f"empty grid for method {m!r}")
    cfg = config if config is not None else SolverConfig()

    def work(r):
        return _one_repetition(
            source, grids, cfg, methods, fractions, normalization,
            average, master_seed + r, keep_estimates=(r == 0),
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reps = list(pool.map(work, range(repetitions)))
    else:
        reps = [work(r) for r in range(repetitions)]

    task = ("classification"
            if isinstance(source, ClassificationSpec)
            or (isinstance(source, Dataset)
                and source.task == "classification")
            else "regression")
    summary, selected, per_rep, errors = {}, {}, {}, {}
    for m in methods:
        cells = [rep["cells"][m] for rep in reps]
        selected[m] = [c["params"] for c in cells]
        per_rep[m] = [c["metrics"] for c in cells]
        errors[m] = [c["error"] for c in cells]
        mean, std = {}, {}
        for name in METRIC_NAMES:
            vals = [c["metrics"][name] for c in cells
                    if c["metrics"] is not None
                    and c["metrics"][name] is not None]
            if vals:
                arr = np.asarray(vals, dtype=float)
                mean[name] = float(arr.mean())
                std[name] = float(arr.std())
        summary[m] = {
            "mean": mean,
            "std": std,
            "failures": sum(c["error"] is not None for c in cells),
        }

    p = reps[0]["p"]
    profile = {
        "index": list(range(1, p + 1)),
        "true": reps[0]["truth"],
        "estimates": {m: reps[0]["cells"][m]["estimate"] for m in methods},
    }
    config_echo = {
        "solver": asdict(cfg),
        "grids": {m: [_reg_to_dict(r) for r in grids.grid_for(m)]
                  for m in methods},
        "source": _source_config(source),
        "fractions": (list(float(v) for v in fractions)
                      if isinstance(source, Dataset) else None),
        "normalization": (normalization
                          if isinstance(source, Dataset) else "l2"),
        "average": bool(average),
    }
    return BenchmarkReport(
        task=task,
        methods=list(methods),
        repetitions=int(repetitions),
        master_seed=int(master_seed),
        metric_names=list(TABLE_METRICS[task]),
        summary=summary,
        selected=selected,
        per_repetition=per_rep,
        errors=errors,
        profile=profile,
        config=config_echo,
    )


def format_table(report):
    """The report.csv text: metrics as rows, methods as columns."""
    lines = ["metric," + ",".join(report.methods)]
    for name in report.metric_names:
        cells = []
        for m in report.methods:
            s = report.summary[m]
            if name in s["mean"]:
                cells.append(f"{s['mean'][name]:.4f}±{s['std'][name]:.4f}")
            else:
                cells.append("")
        lines.append(name + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def emit_table(report, outdir):
    """Write report.csv, report.json, and profile.csv under outdir.

    Returns the three paths.  Serialization is deterministic (sorted JSON
    keys, repr floats), so identical reports yield identical bytes.
    """
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "report.csv")
    json_path = os.path.join(outdir, "report.json")
    profile_path = os.path.join(outdir, "profile.csv")

    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(format_table(report))

    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")

    prof = report.profile
    with open(profile_path, "w", encoding="utf-8") as fh:
        fh.write("index,true," + ",".join(report.methods) + "\n")
        for i, idx in enumerate(prof["index"]):
            row = [str(idx)]
            row.append("" if prof["true"] is None
                       else repr(prof["true"][i]))
            for m in report.methods:
                est = prof["estimates"][m]
                row.append("" if est is None else repr(est[i]))
            fh.write(",".join(row) + "\n")
    return csv_path, json_path, profile_path


def load_report(path):
    """Read back a report.json written by emit_table."""
    with open(path, encoding="utf-8") as fh:
        return BenchmarkReport.from_json_dict(json.load(fh))
