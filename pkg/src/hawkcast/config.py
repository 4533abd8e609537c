"""Flat ``key = value`` configuration files with dotted section names.

Example::

    # forecast.cfg
    pipeline.decomposer = iceemdan
    mohho.population = 40
    ensemble.realizations = 50
    seed = 7

Blank lines and ``#`` comments are ignored. Unknown keys are rejected.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from .decomposition import EnsembleConfig
from .errors import ConfigError
from .pipeline import PipelineConfig

SEED_ENV = "HAWKCAST_SEED"


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_int(text: str) -> int | None:
    return None if text.strip().lower() in ("", "none") else int(text)


def _list(text: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in text.split(",") if item.strip())


@dataclass(frozen=True)
class Key:
    default: Any
    parse: Callable[[str], Any]
    doc: str


SCHEMA: dict[str, Key] = {
    "seed": Key(0, int, "base seed; HAWKCAST_SEED overrides the default"),
    "pipeline.decomposer": Key("iceemdan", str, "none, emd, eemd, ceemd, ceemdan or iceemdan"),
    "pipeline.lag_order": Key(5, int, "number of lagged values fed to each ELM"),
    "pipeline.train_fraction": Key(0.8, float, "chronological training share"),
    "pipeline.validation_fraction": Key(0.2, float, "share of training rows held out for the MOHHO objectives"),
    "pipeline.archive_pick": Key("min_f1", str, "min_f1 or knee"),
    "pipeline.strict_decomposition": Key(False, _bool, "decompose history only (no look-ahead)"),
    "pipeline.compare": Key(False, _bool, "also run ELM, EMD- and CEEMD-MOHHO-ELM baselines"),
    "pipeline.tune": Key(True, _bool, "tune hidden weights with MOHHO (false: random ELM)"),
    "elm.hidden": Key(20, int, "hidden neurons L"),
    "elm.activation": Key("sigmoid", str, "sigmoid, tanh or linear"),
    "elm.weight_bound": Key(1.0, float, "search box half-width for weights and biases"),
    "mohho.population": Key(40, int, "search agents"),
    "mohho.iterations": Key(100, int, "iterations"),
    "mohho.archive": Key(100, int, "archive capacity"),
    "mohho.grid_divisions": Key(10, int, "hypergrid cells per objective"),
    "mohho.crowding_constant": Key(2.0, float, "c in the removal/selection weights, > 1"),
    "ensemble.realizations": Key(100, int, "noise realizations"),
    "ensemble.noise_amplitude": Key(0.2, float, "noise std as a fraction of the signal std"),
    "ensemble.max_sift_iterations": Key(100, int, "sifting budget per IMF"),
    "ensemble.sift_stop_threshold": Key(0.2, float, "Cauchy stop threshold"),
    "ensemble.max_modes": Key(None, _optional_int, "cap on extracted modes (none: unlimited)"),
    "benchmark.problems": Key(("ZDT1", "ZDT2", "ZDT3", "ZDT1-linear"), _list, "comma-separated problem names"),
    "benchmark.runs": Key(50, int, "independent runs per problem"),
    "benchmark.dimension": Key(30, int, "decision variables"),
    "benchmark.front_points": Key(1000, int, "true-front resolution for IGD"),
}


def defaults() -> dict[str, Any]:
    values = {k: v.default for k, v in SCHEMA.items()}
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            values["seed"] = int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return values


def parse_config(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse config text and merge it over the defaults."""
    values = defaults()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = SCHEMA[key].parse(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path: str | Path | None) -> dict[str, Any]:
    if path is None:
        return defaults()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, str(path))


def ensemble_config(values: dict[str, Any]) -> EnsembleConfig:
    try:
        return EnsembleConfig(
            realizations=values["ensemble.realizations"],
            noise_amplitude=values["ensemble.noise_amplitude"],
            max_sift_iterations=values["ensemble.max_sift_iterations"],
            sift_stop_threshold=values["ensemble.sift_stop_threshold"],
            max_modes=values["ensemble.max_modes"],
            seed=values["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def pipeline_config(values: dict[str, Any]) -> PipelineConfig:
    try:
        return PipelineConfig(
            decomposer=values["pipeline.decomposer"],
            lag_order=values["pipeline.lag_order"],
            train_fraction=values["pipeline.train_fraction"],
            validation_fraction=values["pipeline.validation_fraction"],
            elm_hidden=values["elm.hidden"],
            activation=values["elm.activation"],
            tune=values["pipeline.tune"],
            weight_bound=values["elm.weight_bound"],
            population=values["mohho.population"],
            iterations=values["mohho.iterations"],
            archive_capacity=values["mohho.archive"],
            grid_divisions=values["mohho.grid_divisions"],
            crowding_constant=values["mohho.crowding_constant"],
            archive_pick=values["pipeline.archive_pick"],
            strict_decomposition=values["pipeline.strict_decomposition"],
            ensemble=ensemble_config(values),
            seed=values["seed"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def render(values: dict[str, Any]) -> dict[str, Any]:
    """JSON-friendly copy of resolved values."""
    return {k: list(v) if isinstance(v, tuple) else v for k, v in sorted(values.items())}
