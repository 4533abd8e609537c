"""Decompose, tune one ELM per component with MOHHO, forecast, aggregate, evaluate.

Forecasts are one step ahead and static: every test prediction uses the
actual lagged component values. By default the whole series is decomposed
once and the components are split chronologically, which lets the
decomposition see the test span. ``strict_decomposition=True`` avoids that by
decomposing the training span for model fitting and re-decomposing the
history up to each test point at forecast time.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import elm
from .decomposition import EnsembleConfig, ModeSet, decompose
from .errors import EmptyArchive, TooShort
from .evaluation import MetricTable, compute_metrics, dm_test, improvement_percentages, variance_ratio
from .mohho import MohhoConfig, ParetoArchive, mohho_optimize

DECOMPOSER_CHOICES = ("none", "emd", "eemd", "ceemd", "ceemdan", "iceemdan")
PICK_RULES = ("min_f1", "knee")


@dataclass(frozen=True)
class PipelineConfig:
    decomposer: str = "iceemdan"
    lag_order: int = 5
    train_fraction: float = 0.8
    validation_fraction: float = 0.2
    elm_hidden: int = 20
    activation: str = "sigmoid"
    tune: bool = True
    weight_bound: float = 1.0
    population: int = 40
    iterations: int = 100
    archive_capacity: int = 100
    grid_divisions: int = 10
    crowding_constant: float = 2.0
    archive_pick: str = "min_f1"
    strict_decomposition: bool = False
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    seed: int = 0

    def __post_init__(self):
        if self.decomposer not in DECOMPOSER_CHOICES:
            raise ValueError(f"decomposer must be one of {DECOMPOSER_CHOICES}")
        if self.lag_order < 1:
            raise ValueError("lag_order must be >= 1")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if not 0.0 < self.validation_fraction < self.train_fraction:
            raise ValueError("validation_fraction must lie in (0, train_fraction)")
        if self.elm_hidden < 1:
            raise ValueError("elm_hidden must be >= 1")
        if self.archive_pick not in PICK_RULES:
            raise ValueError(f"archive_pick must be one of {PICK_RULES}")

    @property
    def model_name(self) -> str:
        if self.decomposer == "none":
            return "MOHHO-ELM" if self.tune else "ELM"
        return f"{self.decomposer.upper()}-MOHHO-ELM" if self.tune else f"{self.decomposer.upper()}-ELM"


def embed_lags(series, p: int) -> elm.SupervisedSet:
    """Rows ``(y[t-p], ..., y[t-1]) -> y[t]`` for ``t = p .. n-1``."""
    y = np.asarray(series, dtype=float).ravel()
    if p < 1:
        raise ValueError("lag order must be >= 1")
    if len(y) <= p:
        raise TooShort(f"series of length {len(y)} is too short for lag order {p}")
    windows = np.lib.stride_tricks.sliding_window_view(y, p)[:-1]
    return elm.SupervisedSet(windows.copy(), y[p:, None])


def split_point(n: int, train_fraction: float) -> int:
    return int(round(n * train_fraction))


def split(series, train_fraction: float, lag_order: int = 1):
    """Chronological ``(train, test)`` split; both parts must exceed ``lag_order``."""
    y = np.asarray(series, dtype=float).ravel()
    k = split_point(len(y), train_fraction)
    if k < lag_order + 1 or len(y) - k < lag_order + 1:
        raise TooShort(f"cannot split {len(y)} points at {train_fraction} with lag order {lag_order}")
    return y[:k], y[k:]


class ComponentObjective:
    """Accuracy/stability objective pair for one component's ELM parameters.

    ``f1`` is the validation RMSE and ``f2`` the standard deviation of the
    absolute validation errors. Only ``fit_rows`` and ``val_rows`` of the
    supervised set are read; ``touched`` records every target row used.
    """

    def __init__(self, data: elm.SupervisedSet, fit_rows, val_rows, hidden: int, activation: str = "sigmoid"):
        self.data = data
        self.fit_rows = np.asarray(fit_rows)
        self.val_rows = np.asarray(val_rows)
        self.hidden = hidden
        self.activation = activation
        self.n_inputs = data.inputs.shape[1]
        self._fit = elm.SupervisedSet(data.inputs[self.fit_rows], data.targets[self.fit_rows])
        self._val_x = data.inputs[self.val_rows]
        self._val_y = data.targets[self.val_rows]
        self.touched = set(self.fit_rows.tolist()) | set(self.val_rows.tolist())

    def model(self, vector) -> elm.ElmModel:
        W, b = elm.decode_parameters(vector, self.hidden, self.n_inputs)
        return elm.ElmModel(W, b, activation=self.activation)

    def __call__(self, vector) -> np.ndarray:
        trained, _ = elm.train(self.model(vector), self._fit)
        err = np.abs(elm.predict(trained, self._val_x) - self._val_y).ravel()
        return np.array([np.sqrt(np.mean(err**2)), np.std(err)])


def objective_pair(vector, data: elm.SupervisedSet, fit_rows, val_rows, hidden: int, activation="sigmoid") -> np.ndarray:
    return ComponentObjective(data, fit_rows, val_rows, hidden, activation)(vector)


def pick_from_archive(archive, rule: str = "min_f1") -> int:
    """Index of the archive member chosen as the final model.

    ``archive`` is a :class:`ParetoArchive` or an array of objective vectors.
    ``min_f1`` takes the most accurate member; ``knee`` the member farthest from
    the chord joining the two extreme members.
    """
    F = archive.objectives if isinstance(archive, ParetoArchive) else np.atleast_2d(np.asarray(archive, dtype=float))
    if F.size == 0 or len(F) == 0:
        raise EmptyArchive("cannot pick from an empty archive")
    if rule == "min_f1":
        return int(np.lexsort((F[:, 1], F[:, 0]))[0])
    if rule != "knee":
        raise ValueError(f"unknown archive pick rule {rule!r}")
    if len(F) <= 2:
        return int(np.argmin(F[:, 0]))
    a = F[np.argmin(F[:, 0])]
    b = F[np.argmin(F[:, 1])]
    chord = b - a
    length = np.hypot(*chord)
    if length == 0:
        return int(np.argmin(F[:, 0]))
    dist = np.abs(chord[0] * (F[:, 1] - a[1]) - chord[1] * (F[:, 0] - a[0])) / length
    return int(np.argmax(dist))


@dataclass
class ComponentFit:
    model: elm.ElmModel
    center: float
    scale: float
    archive: np.ndarray | None
    picked: np.ndarray | None
    touched_max: int


@dataclass
class ForecastRun:
    model_name: str
    test_index: np.ndarray
    actual: np.ndarray
    predicted: np.ndarray
    component_predictions: np.ndarray
    metrics: MetricTable
    fits: list[ComponentFit]
    train_size: int
    snapshots: list[list[np.ndarray]] = field(default_factory=list)

    @property
    def errors(self) -> np.ndarray:
        return self.actual - self.predicted


def _components(y: np.ndarray, config: PipelineConfig) -> np.ndarray:
    if config.decomposer == "none":
        return y[None, :].copy()
    ms: ModeSet = decompose(config.decomposer, y, config.ensemble)
    return ms.components()


def _fit_component(comp: np.ndarray, train_n: int, k: int, config: PipelineConfig, snapshots: list):
    p = config.lag_order
    train = comp[:train_n]
    center = float(train.mean())
    scale = float(train.std()) or 1.0
    data = embed_lags((comp - center) / scale, p)
    rows = np.arange(train_n - p)  # targets t = p .. train_n-1
    n_val = max(1, int(round(len(rows) * config.validation_fraction)))
    fit_rows, val_rows = rows[:-n_val], rows[-n_val:]
    if len(fit_rows) < 1:
        raise TooShort("training span too short for the validation split")
    seed = config.seed + k
    dim = config.elm_hidden * p + config.elm_hidden
    train_set = elm.SupervisedSet(data.inputs[rows], data.targets[rows])

    if not config.tune:
        rng = np.random.default_rng(seed)
        model = elm.ElmModel.random(config.elm_hidden, p, rng, -config.weight_bound, config.weight_bound,
                                    activation=config.activation)
        model, _ = elm.train(model, train_set)
        return ComponentFit(model, center, scale, None, None, int(rows[-1]) + p)

    objective = ComponentObjective(data, fit_rows, val_rows, config.elm_hidden, config.activation)
    mcfg = MohhoConfig(
        population_size=config.population,
        max_iterations=config.iterations,
        lower_bounds=np.full(dim, -config.weight_bound),
        upper_bounds=np.full(dim, config.weight_bound),
        seed=seed,
        archive_capacity=config.archive_capacity,
        grid_divisions=config.grid_divisions,
        crowding_constant=config.crowding_constant,
    )
    result = mohho_optimize(objective, mcfg)
    snapshots.append(result.snapshots)
    i = pick_from_archive(result.archive, config.archive_pick)
    model, _ = elm.train(objective.model(result.archive.positions[i]), train_set)
    # supervised row r has target index r + p in the component
    touched_max = max(objective.touched) + p
    return ComponentFit(model, center, scale, result.archive.objectives.copy(),
                        result.archive.objectives[i].copy(), touched_max)


def _predict_next(fit: ComponentFit, lags: np.ndarray) -> np.ndarray:
    x = (np.atleast_2d(lags) - fit.center) / fit.scale
    return elm.predict(fit.model, x).ravel() * fit.scale + fit.center


def _align(components: np.ndarray, count: int) -> np.ndarray:
    """Fit ``components`` (modes then residual) into ``count`` rows; extra modes join the residual."""
    modes, residual = components[:-1], components[-1]
    out = np.zeros((count, components.shape[1]))
    keep = min(count - 1, len(modes))
    out[:keep] = modes[:keep]
    out[-1] = residual + modes[keep:].sum(axis=0)
    return out


def run_forecast(series, config: PipelineConfig | None = None) -> ForecastRun:
    config = config or PipelineConfig()
    y = np.asarray(series, dtype=float).ravel()
    p = config.lag_order
    train_n = split_point(len(y), config.train_fraction)
    split(y, config.train_fraction, p)

    source = y[:train_n] if config.strict_decomposition else y
    components = _components(source, config)
    snapshots: list = []
    fits = [_fit_component(c, train_n, k, config, snapshots) for k, c in enumerate(components)]

    test_index = np.arange(train_n, len(y))
    if config.strict_decomposition and config.decomposer != "none":
        comp_pred = np.zeros((len(fits), len(test_index)))
        for j, t in enumerate(test_index):
            hist = _align(_components(y[:t], config), len(fits))
            for k, fit in enumerate(fits):
                comp_pred[k, j] = _predict_next(fit, hist[k, t - p : t])[0]
    else:
        comp_pred = np.array([
            _predict_next(fit, np.lib.stride_tricks.sliding_window_view(c, p)[train_n - p : len(y) - p])
            for fit, c in zip(fits, components)
        ])
    predicted = comp_pred.sum(axis=0)
    actual = y[train_n:]
    return ForecastRun(
        model_name=config.model_name,
        test_index=test_index,
        actual=actual,
        predicted=predicted,
        component_predictions=comp_pred,
        metrics=compute_metrics(actual, predicted),
        fits=fits,
        train_size=train_n,
        snapshots=snapshots,
    )


BASELINES = (("none", False), ("emd", True), ("ceemd", True))
PROPOSED = ("iceemdan", True)


@dataclass
class Comparison:
    proposed: ForecastRun
    baselines: list[ForecastRun]

    @property
    def runs(self) -> list[ForecastRun]:
        return [*self.baselines, self.proposed]

    def improvements(self) -> dict[str, MetricTable]:
        return {
            f"Proposed model vs. {b.model_name}": improvement_percentages(b.metrics, self.proposed.metrics)
            for b in self.baselines
        }

    def dm_rows(self, loss: str = "squared") -> list[tuple[str, float | None, float | None, str, float]]:
        rows = []
        for b in self.baselines:
            dm = dm_test(b.errors, self.proposed.errors, loss)
            rows.append((b.model_name, dm.statistic, dm.p_value, dm.significance,
                         variance_ratio(b.actual, b.predicted)))
        pr = self.proposed
        rows.append((pr.model_name, None, None, "", variance_ratio(pr.actual, pr.predicted)))
        return rows


def compare_models(
    series,
    config: PipelineConfig | None = None,
    baselines: Sequence[tuple[str, bool]] = BASELINES,
    proposed: tuple[str, bool] = PROPOSED,
) -> Comparison:
    """Run the proposed pipeline and each ``(decomposer, tune)`` baseline with the same settings."""
    config = config or PipelineConfig()
    runs = [run_forecast(series, replace(config, decomposer=d, tune=t)) for d, t in baselines]
    best = run_forecast(series, replace(config, decomposer=proposed[0], tune=proposed[1]))
    return Comparison(best, runs)


def synthetic_series(n: int = 400, seed: int = 0) -> np.ndarray:
    """Trend plus weekly and monthly tones plus AR(1) noise; strictly positive."""
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    noise = np.zeros(n)
    shocks = rng.normal(0.0, 4.0, n)
    for i in range(1, n):
        noise[i] = 0.6 * noise[i - 1] + shocks[i]
    return 60.0 + 0.05 * t + 12.0 * np.sin(2 * np.pi * t / 7.0) + 8.0 * np.sin(2 * np.pi * t / 30.0) + noise
