"""Forecast accuracy criteria, improvement percentages, DM test and variance ratio."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields

import numpy as np
from scipy.stats import norm

from .errors import (
    DegenerateDenominator,
    DegenerateVariance,
    LengthMismatch,
    ZeroActual,
    ZeroBaseline,
    ZeroVariance,
)

METRIC_COLUMNS = ("MAE", "RMSE", "MAPE", "IA", "U1", "U2", "r")

# two-sided normal critical values and their footnote marks
SIGNIFICANCE_LEVELS = ((2.58, "a", 0.01), (1.96, "b", 0.05), (1.64, "c", 0.10))


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.shape != p.shape:
        raise LengthMismatch(f"actual has {a.size} values, predicted has {p.size}")
    if a.size < 2:
        raise LengthMismatch("need at least two observations")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
        raise ValueError("forecast pair must be finite")
    return a, p


def _no_zero(a: np.ndarray) -> None:
    if np.any(a == 0):
        raise ZeroActual("actual series contains zeros")


def mae(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    return float(np.mean(np.abs(p - a)))


def rmse(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    return float(np.sqrt(np.mean((p - a) ** 2)))


def mape(actual, predicted) -> float:
    """Mean absolute percentage error, in percent."""
    a, p = _pair(actual, predicted)
    _no_zero(a)
    return float(np.mean(np.abs((p - a) / a)) * 100.0)


def ia(actual, predicted) -> float:
    """Willmott's index of agreement."""
    a, p = _pair(actual, predicted)
    abar = a.mean()
    a, p = a - abar, p - abar
    scale = max(np.max(np.abs(a)), np.max(np.abs(p)))
    if scale == 0:
        raise DegenerateDenominator("both series are constant at the actual mean")
    a, p = a / scale, p / scale
    den = np.sum((np.abs(p) + np.abs(a)) ** 2)
    # nonnegative in exact arithmetic; clip rounding below zero
    return float(max(0.0, 1.0 - np.sum((p - a) ** 2) / den))


def u1(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    scale = max(np.max(np.abs(a)), np.max(np.abs(p)))
    if scale == 0:
        raise DegenerateDenominator("both series are identically zero")
    # scale-free ratio; normalizing first keeps tiny or huge inputs from under/overflowing
    a, p = a / scale, p / scale
    den = np.sqrt(np.mean(a**2)) + np.sqrt(np.mean(p**2))
    return float(np.sqrt(np.mean((p - a) ** 2)) / den)


def u2(actual, predicted) -> float:
    """Theil's U2: forecast relative errors against the no-change forecast's."""
    a, p = _pair(actual, predicted)
    _no_zero(a[:-1])
    num = np.sum(((p[1:] - a[1:]) / a[:-1]) ** 2)
    den = np.sum(((a[1:] - a[:-1]) / a[:-1]) ** 2)
    if den == 0:
        raise DegenerateDenominator("actual series is constant")
    return float(np.sqrt(num) / np.sqrt(den))


def pearson_r(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    da, dp = a - a.mean(), p - p.mean()
    sa, sp = np.max(np.abs(da)), np.max(np.abs(dp))
    if sa == 0 or sp == 0:
        raise DegenerateVariance("pearson r needs two non-constant series")
    da, dp = da / sa, dp / sp
    return float(np.clip(np.sum(da * dp) / np.sqrt(np.sum(da**2) * np.sum(dp**2)), -1.0, 1.0))


@dataclass(frozen=True)
class MetricTable:
    mae: float
    rmse: float
    mape: float
    ia: float
    u1: float
    u2: float
    r: float

    def as_row(self) -> list[float]:
        return [getattr(self, f.name) for f in fields(self)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(METRIC_COLUMNS, self.as_row()))

    @classmethod
    def from_row(cls, row) -> "MetricTable":
        return cls(*(float(v) for v in row))


_METRIC_FUNCS = (mae, rmse, mape, ia, u1, u2, pearson_r)
_UNDEFINED = (ZeroActual, DegenerateDenominator, DegenerateVariance)


def compute_metrics(actual, predicted, strict: bool = False) -> MetricTable:
    """All seven criteria; undefined ones are NaN unless ``strict``."""
    values = []
    for fn in _METRIC_FUNCS:
        try:
            values.append(fn(actual, predicted))
        except _UNDEFINED:
            if strict:
                raise
            values.append(math.nan)
    return MetricTable(*values)


def improvement_percentages(baseline: MetricTable, improved: MetricTable) -> MetricTable:
    """Per-metric ``|(baseline - improved) / baseline| * 100``."""
    out = []
    for b, m in zip(baseline.as_row(), improved.as_row()):
        if b == 0:
            raise ZeroBaseline("baseline metric is zero")
        out.append(abs((b - m) / b) * 100.0)
    return MetricTable(*out)


@dataclass(frozen=True)
class DmResult:
    statistic: float
    p_value: float

    @property
    def significance(self) -> str:
        """Footnote mark ``a``/``b``/``c`` for the 1%/5%/10% level, or ``""``."""
        return significance_mark(self.statistic)


def significance_mark(statistic: float) -> str:
    for z, mark, _ in SIGNIFICANCE_LEVELS:
        if abs(statistic) > z:
            return mark
    return ""


def dm_test(errors_a, errors_b, loss: str = "squared") -> DmResult:
    """Diebold-Mariano test for one-step-ahead forecasts.

    ``d = loss(e_a) - loss(e_b)``; the statistic is ``mean(d) / sqrt(var(d) / L)``
    with the lag-0 (population) variance, and the p-value is two-sided
    standard normal. Positive values mean ``a`` has the larger loss.
    """
    ea, eb = _pair(errors_a, errors_b)
    if loss == "squared":
        d = ea**2 - eb**2
    elif loss == "absolute":
        d = np.abs(ea) - np.abs(eb)
    else:
        raise ValueError(f"loss must be 'squared' or 'absolute', not {loss!r}")
    var = float(np.mean((d - d.mean()) ** 2))
    if var == 0:
        raise ZeroVariance("loss differential is constant")
    stat = float(d.mean() / math.sqrt(var / d.size))
    return DmResult(stat, float(2.0 * norm.sf(abs(stat))))


def variance_ratio(actual, predicted) -> float:
    """Symmetric variance ratio ``min(var) / max(var)`` in [0, 1]."""
    a, p = _pair(actual, predicted)
    va, vp = float(np.var(a)), float(np.var(p))
    if va == 0:
        raise DegenerateVariance("actual series has zero variance")
    return min(va, vp) / max(va, vp)


def metrics_csv(rows: dict[str, MetricTable], label: str = "Model") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([label, *METRIC_COLUMNS])
    for name, table in rows.items():
        w.writerow([name, *(repr(v) for v in table.as_row())])
    return buf.getvalue()


def metrics_json(rows: dict[str, MetricTable]) -> str:
    return json.dumps({name: t.as_dict() for name, t in rows.items()}, indent=2, sort_keys=False)


def metric_table_from_dict(d: dict) -> MetricTable:
    return MetricTable(*(float(d[k]) for k in METRIC_COLUMNS))
