"""Command-line interface.

Subcommands:

* ``prox``      -- apply one proximity operator to an inline vector
* ``synth``     -- run the synthetic regression benchmark, write reports
* ``fit``       -- fit a CSV dataset end to end and report test metrics
* ``describe``  -- print a quick summary of a CSV dataset

Exit codes: 0 success, 1 runtime or I/O failure, 2 argument errors.
stdout is machine-parseable under ``--json``; stderr carries diagnostics.
A ``--config FILE`` of flat key=value lines supplies defaults for any
flag of the chosen subcommand (explicit flags win); the environment
variable SPARCREG_OUTDIR sets the default output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from .data import (
    DataError,
    SPLIT_NAMES,
    SyntheticSpec,
    load_csv,
    normalize_dataset,
    split_dataset,
    top_correlation_screen,
)
from .experiment import (
    METHOD_NAMES,
    GridSpec,
    _reg_to_dict,
    default_grids,
    emit_table,
    format_table,
    grid_search,
    run_repetitions,
)
from .metrics import cla, compute_report
from .regularizers import ElasticNet, Lasso, Oscar, Sparc, prox, prox_objective
from .solver import SolverConfig, SolverDivergenceError

__all__ = ["main"]


class CliError(Exception):
    """Argument-level problem; maps to exit code 2."""


def _fmt(v):
    return f"{v:g}"


def _parse_vector(text):
    toks = text.replace(",", " ").split()
    if not toks:
        raise CliError("empty vector")
    out = []
    for t in toks:
        try:
            out.append(float(t))
        except ValueError:
            raise CliError(f"could not parse {t!r} as a number") from None
    return np.asarray(out)


def _parse_float_list(text, flag):
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from None


def _parse_int_list(text, flag):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise CliError(f"{flag}: {exc}") from None


def _solver_config(args):
    try:
        return SolverConfig(
            eta=args.eta, alpha_min=args.alpha_min,
            alpha_max=args.alpha_max, max_outer=args.max_outer,
            max_inner=args.max_inner, tol=args.tol, sigma=args.sigma,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _add_solver_flags(p):
    d = SolverConfig()
    p.add_argument("--eta", type=float, default=d.eta)
    p.add_argument("--alpha-min", type=float, default=d.alpha_min)
    p.add_argument("--alpha-max", type=float, default=d.alpha_max)
    p.add_argument("--max-outer", type=int, default=d.max_outer)
    p.add_argument("--max-inner", type=int, default=d.max_inner)
    p.add_argument("--tol", type=float, default=d.tol)
    p.add_argument("--sigma", type=float, default=d.sigma)


def _add_common_flags(p):
    p.add_argument("--config", help="key=value file of flag defaults")
    p.add_argument("--json", action="store_true",
                   help="machine-readable stdout")


def _default_outdir():
    return os.environ.get("SPARCREG_OUTDIR", ".")


# ---------------------------------------------------------------- prox

def _prox_regularizer(args):
    def need(value, flag, method):
        if value is None:
            raise CliError(f"--{method} requires {flag}")
        return value

    def refuse(value, flag, method):
        if value is not None:
            raise CliError(f"{flag} is not a --{method} parameter")

    try:
        if args.lasso:
            refuse(args.lambda2, "--lambda2", "lasso")
            refuse(args.lam, "--lambda", "lasso")
            refuse(args.k, "--k", "lasso")
            return Lasso(need(args.lambda1, "--lambda1", "lasso"))
        if args.enet:
            refuse(args.lam, "--lambda", "enet")
            refuse(args.k, "--k", "enet")
            return ElasticNet(need(args.lambda1, "--lambda1", "enet"),
                              need(args.lambda2, "--lambda2", "enet"))
        if args.oscar:
            refuse(args.lam, "--lambda", "oscar")
            refuse(args.k, "--k", "oscar")
            return Oscar(need(args.lambda1, "--lambda1", "oscar"),
                         need(args.lambda2, "--lambda2", "oscar"))
        refuse(args.lambda1, "--lambda1", "sparc")
        refuse(args.lambda2, "--lambda2", "sparc")
        return Sparc(need(args.lam, "--lambda", "sparc"),
                     need(args.k, "--k", "sparc"))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_prox(args):
    if args.vec is not None:
        v = _parse_vector(args.vec)
    else:
        with open(args.vec_file, encoding="utf-8") as fh:
            v = _parse_vector(fh.read())
    reg = _prox_regularizer(args)
    try:
        x = prox(reg, v)
        obj = prox_objective(reg, v, x)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.json:
        print(json.dumps(
            {"x": [float(t) for t in x], "objective": float(obj)},
            sort_keys=True,
        ))
    else:
        print(" ".join(_fmt(t) for t in x))
        print(f"objective {_fmt(obj)}")
    return 0


# --------------------------------------------------------------- synth

def _parse_methods(text):
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    if not methods:
        raise CliError("no methods given")
    for m in methods:
        if m not in METHOD_NAMES:
            raise CliError(
                f"unknown method {m!r}; choose from {', '.join(METHOD_NAMES)}"
            )
    return methods


def _grid_overrides(args, p):
    lam = (_parse_float_list(args.lambda_grid, "--lambda-grid")
           if args.lambda_grid else None)
    ks = (_parse_int_list(args.k_grid, "--k-grid")
          if args.k_grid else None)
    try:
        return default_grids(p, lam_grid=lam, k_grid=ks)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc)) from None


def _print_config_lines(pairs):
    for key, value in pairs:
        print(f"# {key}={value}")


def cmd_synth(args):
    methods = _parse_methods(args.methods)
    cfg = _solver_config(args)
    if args.reps < 1:
        raise CliError(f"--reps must be >= 1, got {args.reps}")
    if args.threads < 1:
        raise CliError(f"--threads must be >= 1, got {args.threads}")
    spec = SyntheticSpec()
    grids = _grid_overrides(args, spec.p)
    report = run_repetitions(
        spec, grids, config=cfg, repetitions=args.reps,
        master_seed=args.seed, methods=methods,
        average=args.metric_mean, threads=args.threads,
    )
    paths = emit_table(report, args.outdir)
    if args.json:
        print(json.dumps(report.to_json_dict(), sort_keys=True))
    else:
        _print_config_lines([
            ("seed", args.seed), ("reps", args.reps),
            ("methods", ",".join(methods)),
            ("metric_mean", args.metric_mean),
            ("outdir", args.outdir),
        ] + [(f"solver.{k}", v) for k, v in sorted(asdict(cfg).items())])
        print(format_table(report), end="")
        print(f"# wrote {', '.join(paths)}", file=sys.stderr)
    return 0


# ----------------------------------------------------------------- fit

def _parse_fractions(text):
    parts = _parse_float_list(text, "--split")
    if len(parts) != 3:
        raise CliError(f"--split needs three fractions, got {len(parts)}")
    if min(parts) <= 0 or abs(sum(parts) - 1.0) > 1e-9:
        raise CliError(
            f"--split fractions must be positive and sum to 1, got {parts}"
        )
    return tuple(parts)


def _fit_grid(args, p):
    # axes sweep strong to weak regularization, matching default_grids
    lam_axis = sorted(
        (_parse_float_list(args.lambda_grid, "--lambda-grid")
         if args.lambda_grid
         else [float(v) for v in np.logspace(-3, 1, 10)]),
        reverse=True)
    k_axis = (_parse_int_list(args.k_grid, "--k-grid")
              if args.k_grid else [5, 10, 15, 20, 25])
    k_axis = sorted([k for k in k_axis if 1 <= k <= p], reverse=True) or [p]
    # explicit parameters pin their axis; the rest stays on the grid
    a1 = [args.lambda1] if args.lambda1 is not None else lam_axis
    a2 = [args.lambda2] if args.lambda2 is not None else lam_axis
    al = [args.lam] if args.lam is not None else lam_axis
    ak = [args.k] if args.k is not None else k_axis
    try:
        if args.method == "lasso":
            return GridSpec(lasso=tuple(Lasso(l) for l in a1))
        if args.method == "enet":
            return GridSpec(enet=tuple(
                ElasticNet(l1, l2) for l1 in a1 for l2 in a2))
        if args.method == "oscar":
            return GridSpec(oscar=tuple(
                Oscar(l1, l2) for l1 in a1 for l2 in a2))
        return GridSpec(sparc=tuple(
            Sparc(l, min(k, p)) for l in al for k in ak))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _write_coefficients(path, names, e, scales):
    with open(path, "w", encoding="utf-8") as fh:
        header = "feature,coefficient"
        if scales is not None:
            header += ",coefficient_raw"
        fh.write(header + "\n")
        for j, name in enumerate(names):
            row = f"{name},{repr(float(e[j]))}"
            if scales is not None:
                row += f",{repr(float(e[j] / scales[j]))}"
            fh.write(row + "\n")


def cmd_fit(args):
    fractions = _parse_fractions(args.split)
    cfg = _solver_config(args)
    ds = load_csv(args.csv, args.label, args.task)
    try:
        ds = split_dataset(ds, fractions, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    kept = None
    if args.screen is not None:
        if args.screen < 1:
            raise CliError(f"--screen must be >= 1, got {args.screen}")
        ds, kept = top_correlation_screen(ds, args.screen)
    ds, scales = normalize_dataset(ds, args.normalization)
    grids = _fit_grid(args, ds.p)
    reg, e = grid_search(ds, grids.grid_for(args.method), cfg)
    report = compute_report(ds, e, average=args.metric_mean)

    A_te, y_te = ds.part("test")
    r_te = A_te @ e - y_te
    scale = A_te.shape[0] if args.metric_mean else 1
    prediction = {
        "test_mse": float(r_te @ r_te) / scale,
        "test_mae": float(np.abs(r_te).sum()) / scale,
    }
    if ds.task == "classification":
        prediction["test_cla"] = cla(A_te, y_te, e)

    payload = {
        "selected": _reg_to_dict(reg),
        "metrics": report.to_dict(),
        "prediction": prediction,
        "screen_kept": (None if kept is None
                        else [int(j) for j in kept]),
        "config": {
            "csv": args.csv, "label": args.label, "task": args.task,
            "method": args.method, "split": list(fractions),
            "seed": args.seed, "normalization": args.normalization,
            "metric_mean": args.metric_mean, "solver": asdict(cfg),
        },
    }
    os.makedirs(args.outdir, exist_ok=True)
    names = ds.feature_names or tuple(f"f{j}" for j in range(1, ds.p + 1))
    _write_coefficients(
        os.path.join(args.outdir, "coefficients.csv"), names, e, scales)
    with open(os.path.join(args.outdir, "metrics.json"), "w",
              encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")

    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        sel = ", ".join(f"{k}={v}" for k, v in payload["selected"].items()
                        if k != "type")
        print(f"selected {args.method} ({sel})")
        for k, v in sorted(report.to_dict().items()):
            if v is not None:
                print(f"{k} {_fmt(v)}")
        for k, v in sorted(prediction.items()):
            print(f"{k} {_fmt(v)}")
    return 0


# ------------------------------------------------------------ describe

def cmd_describe(args):
    import csv as _csv
    with open(args.csv, newline="", encoding="utf-8") as fh:
        rows = [r for r in _csv.reader(fh) if r]
    if not rows or not rows[1:]:
        raise DataError(f"{args.csv}: need a header and at least one row")
    header = [c.strip() for c in rows[0]]
    split_idx = header.index("split") if "split" in header else None
    candidates = [j for j in range(len(header)) if j != split_idx]
    label_idx = (header.index("label") if "label" in header
                 else candidates[-1])
    feat_idx = [j for j in candidates if j != label_idx]
    if not feat_idx:
        raise DataError("no feature columns")

    labels, feats = [], []
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataError(
                f"line {i + 2}: expected {len(header)} fields, "
                f"found {len(row)}"
            )
        cells = [c.strip() for c in row]
        try:
            labels.append(float(cells[label_idx]))
            feats.append([float(cells[j]) for j in feat_idx])
        except ValueError as exc:
            raise DataError(f"line {i + 2}: {exc}") from None
    A = np.asarray(feats)
    y = np.asarray(labels)
    values, counts = np.unique(y, return_counts=True)
    task = "classification" if values.size == 2 else "regression"
    norms = np.sqrt((A * A).sum(axis=0))

    print(f"n={A.shape[0]} p={A.shape[1]}")
    print(f"label column: {header[label_idx]}")
    print(f"task={task} (inferred)")
    if task == "classification":
        for v, c in zip(values, counts):
            print(f"class {_fmt(v)}: {c} rows")
    else:
        print(f"label range [{_fmt(y.min())}, {_fmt(y.max())}]")
    print(f"column norms in [{_fmt(norms.min())}, {_fmt(norms.max())}]")
    if split_idx is not None:
        for name in SPLIT_NAMES:
            c = sum(1 for row in rows[1:]
                    if row[split_idx].strip() == name)
            print(f"split {name}: {c} rows")
    return 0


# ---------------------------------------------------------------- main

def build_parser():
    parser = argparse.ArgumentParser(
        prog="sparcreg",
        description="Sparse and clustered penalized least squares.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prox", help="apply a proximity operator")
    which = p.add_mutually_exclusive_group(required=True)
    for name in ("lasso", "enet", "oscar", "sparc"):
        which.add_argument(f"--{name}", action="store_true")
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--k", type=int)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--vec", help="comma- or space-separated numbers")
    src.add_argument("--vec-file", help="file of numbers")
    _add_common_flags(p)
    p.set_defaults(func=cmd_prox)

    p = sub.add_parser("synth", help="synthetic regression benchmark")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--methods", default=",".join(METHOD_NAMES))
    p.add_argument("--outdir", default=_default_outdir())
    p.add_argument("--lambda-grid", help="comma-separated penalty grid")
    p.add_argument("--k-grid", help="comma-separated sparsity grid")
    p.add_argument("--metric-mean", action="store_true",
                   help="divide MAE/MSE by the test count")
    p.add_argument("--threads", type=int, default=1)
    _add_solver_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fit", help="fit one CSV dataset")
    p.add_argument("csv")
    p.add_argument("--label", required=True)
    p.add_argument("--task", required=True,
                   choices=("regression", "classification"))
    p.add_argument("--method", required=True, choices=METHOD_NAMES)
    p.add_argument("--split", default="0.5,0.3,0.2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--screen", type=int,
                   help="keep only the m columns most correlated with y")
    p.add_argument("--normalization", default="l2",
                   choices=("l2", "zscore", "none"))
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda-grid")
    p.add_argument("--k-grid")
    p.add_argument("--outdir", default=_default_outdir())
    p.add_argument("--metric-mean", action="store_true")
    _add_solver_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("describe", help="summarize a CSV dataset")
    p.add_argument("csv")
    _add_common_flags(p)
    p.set_defaults(func=cmd_describe)

    return parser


def _config_tokens(path):
    """Turn key=value lines into argv tokens (booleans become bare flags)."""
    toks = []
    with open(path, encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise CliError(
                    f"{path} line {i}: expected key=value, got {raw.rstrip()!r}"
                )
            flag = "--" + key.replace("_", "-")
            if value.lower() == "true":
                toks.append(flag)
            elif value.lower() == "false":
                pass
            else:
                toks.extend([flag, value])
    return toks


def _expand_config(argv):
    """Insert config-file tokens after the subcommand so real flags win."""
    for i, tok in enumerate(argv):
        if tok == "--config":
            if i + 1 >= len(argv):
                return argv  # argparse reports the missing value
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
        else:
            continue
        return argv[:1] + _config_tokens(path) + argv[1:]
    return argv


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        argv = _expand_config(argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, SolverDivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
