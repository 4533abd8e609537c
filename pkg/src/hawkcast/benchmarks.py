"""ZDT test problems, analytic true fronts, and the IGD metric.

References:
    Zitzler, E., Deb, K., & Thiele, L. (2000). Comparison of multiobjective
    evolutionary algorithms: Empirical results. Evolutionary Computation, 8(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import EmptySet, OutOfBox
from .mohho import MohhoConfig, mohho_optimize, non_dominated_mask

N_VARS = 30
TRUE_FRONT_POINTS = 1000


def _check_box(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise OutOfBox("ZDT problems need a decision vector of dimension >= 2")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise OutOfBox("ZDT decision variables must lie in [0, 1]")
    return x


def _g(x: np.ndarray) -> float:
    return 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)


def zdt1(x) -> np.ndarray:
    """Convex front ``f2 = 1 - sqrt(f1)``."""
    x = _check_box(x)
    f1, g = x[0], _g(x)
    return np.array([f1, g * (1.0 - np.sqrt(f1 / g))])


def zdt2(x) -> np.ndarray:
    """Concave front ``f2 = 1 - f1**2``."""
    x = _check_box(x)
    f1, g = x[0], _g(x)
    return np.array([f1, g * (1.0 - (f1 / g) ** 2)])


def zdt3(x) -> np.ndarray:
    """Disconnected front made of five pieces."""
    x = _check_box(x)
    f1, g = x[0], _g(x)
    h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
    return np.array([f1, g * h])


def zdt1_linear(x) -> np.ndarray:
    """ZDT1 with the linear front ``f2 = 1 - f1``."""
    x = _check_box(x)
    f1, g = x[0], _g(x)
    return np.array([f1, g * (1.0 - f1 / g)])


@dataclass(frozen=True)
class TestProblem:
    __test__ = False

    name: str
    objective: Callable[[np.ndarray], np.ndarray]
    front: Callable[[np.ndarray], np.ndarray]
    dimension: int = N_VARS
    filter_front: bool = False

    @property
    def lower_bounds(self) -> np.ndarray:
        return np.zeros(self.dimension)

    @property
    def upper_bounds(self) -> np.ndarray:
        return np.ones(self.dimension)


PROBLEMS: dict[str, TestProblem] = {
    "ZDT1": TestProblem("ZDT1", zdt1, lambda f1: 1.0 - np.sqrt(f1)),
    "ZDT2": TestProblem("ZDT2", zdt2, lambda f1: 1.0 - f1**2),
    "ZDT3": TestProblem(
        "ZDT3", zdt3, lambda f1: 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1), filter_front=True
    ),
    "ZDT1-linear": TestProblem("ZDT1-linear", zdt1_linear, lambda f1: 1.0 - f1),
}


def get_problem(name: str, dimension: int = N_VARS) -> TestProblem:
    try:
        base = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    if dimension == base.dimension:
        return base
    return TestProblem(base.name, base.objective, base.front, dimension, base.filter_front)


def true_front(problem: TestProblem | str, count: int = TRUE_FRONT_POINTS) -> np.ndarray:
    """Points of the analytic front on a uniform ``f1`` grid over [0, 1].

    For ZDT3 the grid is filtered down to its non-dominated points, which
    leaves the five disconnected pieces (fewer than ``count`` points).
    """
    if isinstance(problem, str):
        problem = get_problem(problem)
    if count < 2:
        raise ValueError("count must be >= 2")
    f1 = np.linspace(0.0, 1.0, count)
    pts = np.column_stack([f1, problem.front(f1)])
    if problem.filter_front:
        pts = pts[non_dominated_mask(pts)]
    return pts


def igd(true_points, achieved) -> float:
    """Inverted generational distance ``sqrt(sum(d_t**2)) / n``.

    ``d_t`` is the distance from the t-th true point to its nearest achieved
    point and ``n`` the number of true points.
    """
    T = np.atleast_2d(np.asarray(true_points, dtype=float))
    A = np.atleast_2d(np.asarray(achieved, dtype=float))
    if T.size == 0 or A.size == 0:
        raise EmptySet("igd needs nonempty true and achieved sets")
    d2 = ((T[:, None, :] - A[None, :, :]) ** 2).sum(axis=2).min(axis=1)
    return float(np.sqrt(d2.sum()) / len(T))


@dataclass(frozen=True)
class IgdStats:
    mean: float
    std: float
    median: float
    best: float
    worst: float

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "IgdStats":
        v = np.asarray(list(values), dtype=float)
        if v.size == 0:
            raise EmptySet("no IGD values")
        return cls(float(v.mean()), float(v.std()), float(np.median(v)), float(v.min()), float(v.max()))

    def as_row(self) -> list[float]:
        return [self.mean, self.std, self.median, self.best, self.worst]


@dataclass
class ComparisonResult:
    problem: str
    algorithm: str
    igd_values: list[float]
    fronts: list[np.ndarray]
    stats: IgdStats


def mohho_algorithm(
    population: int = 40, iterations: int = 100, archive: int = 100, **extra
) -> Callable[[TestProblem, int], np.ndarray]:
    """Adapter running MOHHO with the given budget; returns the achieved front."""

    def run(problem: TestProblem, seed: int) -> np.ndarray:
        cfg = MohhoConfig(
            population_size=population,
            max_iterations=iterations,
            lower_bounds=problem.lower_bounds,
            upper_bounds=problem.upper_bounds,
            seed=seed,
            archive_capacity=archive,
            **extra,
        )
        return mohho_optimize(problem.objective, cfg, keep_snapshots=False).archive.objectives

    return run


def run_comparison(
    problem: TestProblem | str,
    algorithm: Callable[[TestProblem, int], np.ndarray],
    runs: int = 50,
    seed: int = 0,
    algorithm_name: str = "MOHHO",
    front_points: int = TRUE_FRONT_POINTS,
) -> ComparisonResult:
    """Run ``algorithm(problem, seed + k)`` for ``k < runs`` and summarize IGD."""
    if isinstance(problem, str):
        problem = get_problem(problem)
    reference = true_front(problem, front_points)
    fronts = [np.asarray(algorithm(problem, seed + k), dtype=float) for k in range(runs)]
    values = [igd(reference, f) for f in fronts]
    return ComparisonResult(problem.name, algorithm_name, values, fronts, IgdStats.from_values(values))


def compare_fronts(
    problem: TestProblem | str,
    fronts: list[np.ndarray],
    algorithm_name: str,
    front_points: int = TRUE_FRONT_POINTS,
) -> ComparisonResult:
    """Score fronts produced elsewhere (e.g. by another optimizer) against the true front."""
    if isinstance(problem, str):
        problem = get_problem(problem)
    reference = true_front(problem, front_points)
    values = [igd(reference, f) for f in fronts]
    return ComparisonResult(problem.name, algorithm_name, values, list(fronts), IgdStats.from_values(values))
