"""Command-line entry point: ``hawkcast forecast|benchmark|decompose|evaluate``.

Exit codes: 0 success, 1 internal error, 2 usage, input or config error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import benchmarks as bm
from .config import load_config, pipeline_config, ensemble_config, render
from .decomposition import decompose
from .errors import HawkcastError
from .evaluation import METRIC_COLUMNS, compute_metrics, metrics_csv, variance_ratio
from .ingest import file_digest, ingest_csv, read_front_csv, write_csv, STAT_COLUMNS
from .pipeline import compare_models, run_forecast

log = logging.getLogger("hawkcast")


class UsageError(Exception):
    """Bad input path or arguments; maps to exit code 2."""


def _now() -> str:
    # SOURCE_DATE_EPOCH pins timestamps so bundles can be byte-identical
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        moment = datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    else:
        moment = datetime.now(timezone.utc)
    return moment.isoformat(timespec="seconds")


class Manifest:
    def __init__(self, command: str, values: dict, input_path: str | None):
        self.data = {
            "command": command,
            "tool_version": __version__,
            "input": str(input_path) if input_path else None,
            "input_digest": file_digest(input_path) if input_path else None,
            "seed": values.get("seed"),
            "config": render(values),
            "started_at": _now(),
            "finished_at": None,
        }

    def write(self, outdir: Path) -> None:
        self.data["finished_at"] = _now()
        (outdir / "manifest.json").write_text(json.dumps(self.data, indent=2) + "\n")


def _require_file(path: str) -> str:
    if not Path(path).is_file():
        raise UsageError(f"input file not found: {path}")
    return path


def _outdir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _values(args) -> dict:
    values = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        values["seed"] = args.seed
    return values


def _stamps(series, index):
    if series.timestamps is None:
        return [int(i) for i in index]
    return [str(series.timestamps[i]) for i in index]


def cmd_forecast(args) -> int:
    from .plotting import forecast_plot

    _require_file(args.input)
    values = _values(args)
    if args.compare:
        values["pipeline.compare"] = True
    manifest = Manifest("forecast", values, args.input)
    series, stats = ingest_csv(args.input, args.value_column, args.date_column, args.delimiter)
    config = pipeline_config(values)
    out = _outdir(args.output)

    if values["pipeline.compare"]:
        comparison = compare_models(series.values, config)
        proposed = comparison.proposed
        runs = comparison.runs
        improvements = comparison.improvements()
        dm_rows = comparison.dm_rows()
    else:
        proposed = run_forecast(series.values, config)
        runs = [proposed]
        improvements = {}
        dm_rows = [(proposed.model_name, None, None, "", variance_ratio(proposed.actual, proposed.predicted))]

    comp = proposed.component_predictions
    names = [f"mode_{k + 1}" for k in range(len(comp) - 1)] + ["residual"] if len(comp) > 1 else []
    write_csv(
        out / "predictions.csv",
        ["timestamp", "actual", "predicted", *names],
        (
            [stamp, a, p, *(comp[:, j] if names else [])]
            for j, (stamp, a, p) in enumerate(
                zip(_stamps(series, proposed.test_index), proposed.actual, proposed.predicted)
            )
        ),
    )
    (out / "metrics.csv").write_text(metrics_csv({r.model_name: r.metrics for r in runs}))
    write_csv(
        out / "improvements.csv",
        ["Models", *(f"P_{c}" for c in METRIC_COLUMNS)],
        ([name, *table.as_row()] for name, table in improvements.items()),
    )
    write_csv(out / "dm_vr.csv", ["Model", "DM", "p_value", "significance", "VR"], dm_rows)
    write_csv(out / "statistics.csv", list(STAT_COLUMNS), [[stats[c] for c in STAT_COLUMNS]])
    forecast_plot(out / "forecast.svg", proposed.test_index, proposed.actual, proposed.predicted,
                  proposed.model_name)
    manifest.write(out)
    for r in runs:
        log.info("%s RMSE=%.4f MAPE=%.3f%%", r.model_name, r.metrics.rmse, r.metrics.mape)
    return 0


def cmd_benchmark(args) -> int:
    from .plotting import front_plot

    values = _values(args)
    if args.runs is not None:
        values["benchmark.runs"] = args.runs
    if args.iters is not None:
        values["mohho.iterations"] = args.iters
    if args.problems:
        values["benchmark.problems"] = tuple(p.strip() for p in args.problems.split(","))
    manifest = Manifest("benchmark", values, None)
    out = _outdir(args.output)
    fronts_dir = out / "fronts"
    fronts_dir.mkdir(exist_ok=True)

    external = []
    for spec in args.external or []:
        name, _, directory = spec.partition("=")
        if not name or not directory or not Path(directory).is_dir():
            raise UsageError(f"--external expects NAME=DIR with an existing directory, got {spec!r}")
        external.append((name, Path(directory)))

    try:
        algorithm = bm.mohho_algorithm(
            population=values["mohho.population"],
            iterations=values["mohho.iterations"],
            archive=values["mohho.archive"],
            grid_divisions=values["mohho.grid_divisions"],
            crowding_constant=values["mohho.crowding_constant"],
        )
        problems = [bm.get_problem(p, values["benchmark.dimension"]) for p in values["benchmark.problems"]]
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    stats_rows, run_rows = [], []
    for problem in problems:
        results = [bm.run_comparison(problem, algorithm, values["benchmark.runs"], values["seed"],
                                     "MOHHO", values["benchmark.front_points"])]
        for name, directory in external:
            files = sorted(directory.glob(f"{problem.name}_run*.csv"))
            if files:
                results.append(bm.compare_fronts(problem, [read_front_csv(f) for f in files], name,
                                                 values["benchmark.front_points"]))
        reference = bm.true_front(problem, values["benchmark.front_points"])
        write_csv(fronts_dir / f"{problem.name}_true.csv", ["f1", "f2"], reference.tolist())
        for res in results:
            stats_rows.append([res.problem, res.algorithm, *res.stats.as_row()])
            for k, v in enumerate(res.igd_values):
                run_rows.append([res.problem, res.algorithm, k, v])
        mohho = results[0]
        for k, front in enumerate(mohho.fronts):
            order = np.argsort(front[:, 0], kind="stable")
            write_csv(fronts_dir / f"{problem.name}_MOHHO_run{k}.csv", ["f1", "f2"], front[order].tolist())
        front_plot(out / f"{problem.name}_front.svg", reference, mohho.fronts[0], problem.name)
        log.info("%s MOHHO mean IGD %.6f", problem.name, mohho.stats.mean)

    write_csv(out / "igd_stats.csv", ["Problem", "Algorithm", "Ave.", "Std.", "Median", "Best", "Worst"], stats_rows)
    write_csv(out / "igd_runs.csv", ["problem", "algorithm", "run", "igd"], run_rows)
    manifest.write(out)
    return 0


def cmd_decompose(args) -> int:
    _require_file(args.input)
    values = _values(args)
    manifest = Manifest("decompose", values, args.input)
    manifest.data["method"] = args.method
    series, _ = ingest_csv(args.input, args.value_column, args.date_column, args.delimiter)
    try:
        modes = decompose(args.method, series.values, ensemble_config(values))
    except ValueError as exc:
        if isinstance(exc, HawkcastError):
            raise
        raise UsageError(str(exc)) from None
    out = _outdir(args.output)
    comps = modes.components()
    header = ["timestamp", "value", *(f"mode_{k + 1}" for k in range(modes.n_modes)), "residual"]
    stamps = _stamps(series, range(len(series)))
    write_csv(out / "modes.csv", header, ([stamps[i], series.values[i], *comps[:, i]] for i in range(len(series))))
    manifest.write(out)
    return 0


def cmd_evaluate(args) -> int:
    _require_file(args.input)
    values = _values(args)
    manifest = Manifest("evaluate", values, args.input)
    actual, _ = ingest_csv(args.input, args.actual_column, delimiter=args.delimiter)
    predicted, _ = ingest_csv(args.input, args.predicted_column, delimiter=args.delimiter)
    table = compute_metrics(actual.values, predicted.values)
    text = metrics_csv({args.predicted_column: table})
    sys.stdout.write(text)
    if args.output:
        out = _outdir(args.output)
        (out / "metrics.csv").write_text(text)
        manifest.write(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hawkcast", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--seed", type=int, help="overrides the config and HAWKCAST_SEED")
        if needs_input:
            p.add_argument("--input", required=True, help="CSV file with a header row")
            p.add_argument("--delimiter", default=",")

    p = sub.add_parser("forecast", help="run the decomposition-MOHHO-ELM pipeline")
    common(p)
    p.add_argument("--value-column", required=True)
    p.add_argument("--date-column")
    p.add_argument("--compare", action="store_true", help="also run the baseline models")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("benchmark", help="MOHHO on the ZDT suite, scored by IGD")
    common(p, needs_input=False)
    p.add_argument("--runs", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--problems", help="comma-separated subset, e.g. ZDT1,ZDT3")
    p.add_argument("--external", action="append", metavar="NAME=DIR",
                   help="score fronts <PROBLEM>_run*.csv produced by another algorithm")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("decompose", help="write the modes of one column")
    common(p)
    p.add_argument("--value-column", required=True)
    p.add_argument("--date-column")
    p.add_argument("--method", default="iceemdan", choices=["emd", "eemd", "ceemd", "ceemdan", "iceemdan"])
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("evaluate", help="metrics for two columns of one CSV")
    common(p)
    p.add_argument("--actual-column", required=True)
    p.add_argument("--predicted-column", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, HawkcastError) as exc:
        print(f"hawkcast {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"hawkcast {args.command}: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
