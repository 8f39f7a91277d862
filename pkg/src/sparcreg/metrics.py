"""Evaluation metrics for fitted coefficient vectors.

Six metrics, all computed on the test split:

* MAE  -- ||A (x* - e)||_1, needs ground truth
* MSE  -- ||A (x* - e)||_2^2, needs ground truth
* SER  -- || |x*| - |e| ||_1 / p, reported as a percentage
* DoF  -- number of distinct nonzero magnitude classes in e
* CLA  -- percentage of test rows with sign(a^T e) = y, sign(0) = +1
* NNZ  -- number of entries with |e_i| above a small tolerance

MAE and MSE are sums over test rows, not means; pass ``average=True`` to
``compute_report`` to divide both by the test count.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields

import numpy as np

from .prox import _as_vector

__all__ = [
    "MetricUnavailableError",
    "MetricsReport",
    "mae",
    "mse",
    "ser",
    "dof",
    "cla",
    "nnz",
    "compute_report",
]

METRIC_NAMES = ("MAE", "MSE", "SER", "DoF", "CLA", "NNZ")


class MetricUnavailableError(ValueError):
    """The metric's inputs (usually ground truth) are missing."""


@dataclass(frozen=True)
class MetricsReport:
    """Flat bundle of the six metrics; fields are None when unavailable."""

    MAE: float | None = None
    MSE: float | None = None
    SER: float | None = None
    DoF: int | None = None
    CLA: float | None = None
    NNZ: int | None = None

    def __post_init__(self):
        if self.DoF is not None and self.NNZ is not None:
            if self.DoF > self.NNZ:
                raise ValueError(
                    f"DoF {self.DoF} exceeds NNZ {self.NNZ}"
                )
        if self.SER is not None and self.SER < 0:
            raise ValueError(f"SER must be >= 0, got {self.SER}")
        if self.CLA is not None and not 0 <= self.CLA <= 100:
            raise ValueError(f"CLA must be in [0, 100], got {self.CLA}")

    def to_dict(self):
        """Flat name -> value dict, None for unavailable metrics."""
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self):
        """Two CSV lines: header and one value row (empty = unavailable)."""
        def cell(v):
            if v is None:
                return ""
            return repr(v) if isinstance(v, float) else v

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(METRIC_NAMES)
        w.writerow([cell(getattr(self, k)) for k in METRIC_NAMES])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: d.get(k) for k in METRIC_NAMES})


def _require_truth(x_true):
    if x_true is None:
        raise MetricUnavailableError("ground truth x* is unavailable")
    return _as_vector(x_true, "x_true")


def mae(A_test, x_true, e):
    """Sum of absolute prediction differences ||A (x* - e)||_1."""
    x_true = _require_truth(x_true)
    e = _as_vector(e, "e")
    return float(np.abs(A_test @ (x_true - e)).sum())


def mse(A_test, x_true, e):
    """Sum of squared prediction differences ||A (x* - e)||_2^2."""
    x_true = _require_truth(x_true)
    e = _as_vector(e, "e")
    r = A_test @ (x_true - e)
    return float(r @ r)


def ser(x_true, e, p=None):
    """Mean absolute magnitude error || |x*| - |e| ||_1 / p, as a percent.

    Depends on magnitudes only, so it is blind to sign flips.
    """
    x_true = _require_truth(x_true)
    e = _as_vector(e, "e")
    if x_true.size != e.size:
        raise ValueError("x* and e must have equal length")
    p = x_true.size if p is None else int(p)
    return float(np.abs(np.abs(x_true) - np.abs(e)).sum() / p * 100.0)


def dof(e, tol=1e-4, zero_tol=1e-8):
    """Distinct magnitude classes among the nonzero entries of e.

    Two magnitudes share a class when they differ by at most
    tol * (1 + larger).  Sorting makes the classes contiguous, so one pass
    over adjacent gaps counts them.
    """
    e = _as_vector(e, "e")
    mags = np.sort(np.abs(e[np.abs(e) > zero_tol]))
    if mags.size == 0:
        return 0
    gaps = np.diff(mags)
    return int(1 + np.count_nonzero(gaps > tol * (1.0 + mags[1:])))


def cla(A_test, y_test, e):
    """Percentage of rows where sign(a^T e) matches the label; sign(0) = +1."""
    e = _as_vector(e, "e")
    y_test = _as_vector(y_test, "y_test")
    if A_test.shape[0] == 0:
        raise ValueError("no test rows")
    pred = np.where(A_test @ e >= 0, 1.0, -1.0)
    return float((pred == y_test).mean() * 100.0)


def nnz(e, tol=1e-8):
    """Number of entries with |e_i| > tol."""
    e = _as_vector(e, "e")
    return int(np.count_nonzero(np.abs(e) > tol))


def compute_report(ds, e, average=False):
    """All metrics available for a dataset's test split.

    Regression reports MAE, MSE, SER (when ground truth exists), DoF and
    NNZ; classification reports CLA, DoF and NNZ.  ``average=True``
    divides MAE and MSE by the number of test rows.
    """
    A_test, y_test = ds.part("test")
    vals = {"DoF": dof(e), "NNZ": nnz(e)}
    if ds.task == "classification":
        vals["CLA"] = cla(A_test, y_test, e)
    else:
        if ds.x_true is not None:
            scale = A_test.shape[0] if average else 1
            vals["MAE"] = mae(A_test, ds.x_true, e) / scale
            vals["MSE"] = mse(A_test, ds.x_true, e) / scale
            vals["SER"] = ser(ds.x_true, e, ds.p)
    return MetricsReport(**vals)
