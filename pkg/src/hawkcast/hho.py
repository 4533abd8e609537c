"""Single-objective Harris hawks optimization.

The positional operators are plain functions of numpy vectors so the
multi-objective variant in :mod:`hawkcast.mohho` can reuse them unchanged.
Random draws are passed in explicitly where a caller (or a test) needs to pin
them; otherwise they come from the supplied ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyPopulation

LEVY_BETA = 1.5

STRATEGIES = (
    "exploration",
    "soft_besiege",
    "hard_besiege",
    "soft_besiege_dives",
    "hard_besiege_dives",
)


@dataclass
class Hawk:
    position: np.ndarray
    objectives: np.ndarray | None = None


@dataclass(frozen=True)
class HhoConfig:
    population_size: int
    max_iterations: int
    lower_bounds: Sequence[float]
    upper_bounds: Sequence[float]
    seed: int = 0

    def __post_init__(self):
        lb = np.atleast_1d(np.asarray(self.lower_bounds, dtype=float))
        ub = np.atleast_1d(np.asarray(self.upper_bounds, dtype=float))
        if lb.shape != ub.shape:
            raise ValueError("lower and upper bounds must have the same dimension")
        if not np.all(lb < ub):
            raise ValueError("lower bounds must be strictly below upper bounds")
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        object.__setattr__(self, "lower_bounds", lb)
        object.__setattr__(self, "upper_bounds", ub)

    @property
    def dimension(self) -> int:
        return len(self.lower_bounds)


@dataclass(frozen=True)
class EscapeState:
    """Random quantities governing one hawk's move in one iteration."""

    E0: float
    E: float
    J: float
    r: float
    q: float

    @classmethod
    def draw(cls, iteration: int, max_iterations: int, rng: np.random.Generator) -> "EscapeState":
        E0 = 2.0 * rng.random() - 1.0
        E = escape_energy(E0, iteration, max_iterations)
        J = 2.0 * (1.0 - rng.random())
        return cls(E0=E0, E=E, J=J, r=rng.random(), q=rng.random())

    def strategy(self) -> str:
        if abs(self.E) >= 1.0:
            return "exploration"
        soft = abs(self.E) >= 0.5
        if self.r >= 0.5:
            return "soft_besiege" if soft else "hard_besiege"
        return "soft_besiege_dives" if soft else "hard_besiege_dives"


def clamp(x, lb, ub) -> np.ndarray:
    return np.minimum(np.maximum(x, lb), ub)


def mean_position(population) -> np.ndarray:
    """Componentwise mean of the hawks' positions."""
    pop = np.asarray(population, dtype=float)
    if pop.size == 0 or len(pop) == 0:
        raise EmptyPopulation("mean_position needs at least one hawk")
    return pop.mean(axis=0)


def escape_energy(E0: float, iteration: int, max_iterations: int) -> float:
    """Escaping energy ``2 * E0 * (1 - iter / T)``."""
    return 2.0 * E0 * (1.0 - iteration / max_iterations)


def exploration_step(
    hawk,
    rand_hawk,
    rabbit,
    mean_pos,
    lb,
    ub,
    rng: np.random.Generator | None = None,
    *,
    q: float | None = None,
    r1: float | None = None,
    r2: float | None = None,
    r3: float | None = None,
    r4: float | None = None,
) -> np.ndarray:
    """Perch either relative to a random hawk (q >= 0.5) or to the rabbit and the flock mean."""
    draw = (lambda v: v if v is not None else rng.random())
    q = draw(q)
    X = np.asarray(hawk, dtype=float)
    if q >= 0.5:
        r1, r2 = draw(r1), draw(r2)
        X_rand = np.asarray(rand_hawk, dtype=float)
        new = X_rand - r1 * np.abs(X_rand - 2.0 * r2 * X)
    else:
        r3, r4 = draw(r3), draw(r4)
        new = (np.asarray(rabbit) - np.asarray(mean_pos)) - r3 * (lb + r4 * (ub - lb))
    return clamp(new, lb, ub)


def soft_besiege(hawk, rabbit, E: float, J: float, lb=-np.inf, ub=np.inf) -> np.ndarray:
    X = np.asarray(hawk, dtype=float)
    X_rabbit = np.asarray(rabbit, dtype=float)
    delta = X_rabbit - X
    return clamp(delta - E * np.abs(J * X_rabbit - X), lb, ub)


def hard_besiege(hawk, rabbit, E: float, lb=-np.inf, ub=np.inf) -> np.ndarray:
    X = np.asarray(hawk, dtype=float)
    X_rabbit = np.asarray(rabbit, dtype=float)
    return clamp(X_rabbit - E * np.abs(X_rabbit - X), lb, ub)


def levy_sigma(beta: float = LEVY_BETA) -> float:
    num = math.gamma(1 + beta) * math.sin(math.pi * beta / 2)
    den = math.gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2)
    return (num / den) ** (1 / beta)


_SIGMA = levy_sigma()


def levy_flight(dimension: int, rng: np.random.Generator, beta: float = LEVY_BETA) -> np.ndarray:
    """Mantegna-style Levy step ``0.01 * mu * sigma / |v|**(1/beta)``."""
    sigma = _SIGMA if beta == LEVY_BETA else levy_sigma(beta)
    mu = rng.standard_normal(dimension)
    v = rng.standard_normal(dimension)
    return 0.01 * mu * sigma / np.abs(v) ** (1.0 / beta)


def soft_besiege_dives(
    hawk, rabbit, E, J, rng, objective, lb=-np.inf, ub=np.inf, current_value=None, improves=None
):
    """Soft besiege with progressive rapid dives and greedy acceptance.

    Returns ``(position, value, evaluations)`` where ``evaluations`` lists the
    ``(point, value)`` pairs that were scored. The hawk keeps its position when
    neither dive improves on it. ``improves(new, old)`` defaults to ``new < old``.
    """
    X = np.asarray(hawk, dtype=float)
    X_rabbit = np.asarray(rabbit, dtype=float)
    Y = X_rabbit - E * np.abs(J * X_rabbit - X)
    return _greedy_dive(X, Y, rng, objective, lb, ub, current_value, improves)


def hard_besiege_dives(
    hawk, rabbit, mean_pos, E, J, rng, objective, lb=-np.inf, ub=np.inf, current_value=None, improves=None
):
    """Hard besiege with progressive rapid dives; the dive is anchored on the flock mean."""
    X = np.asarray(hawk, dtype=float)
    X_rabbit = np.asarray(rabbit, dtype=float)
    Y = X_rabbit - E * np.abs(J * X_rabbit - np.asarray(mean_pos, dtype=float))
    return _greedy_dive(X, Y, rng, objective, lb, ub, current_value, improves)


def _greedy_dive(X, Y, rng, objective, lb, ub, current_value, improves):
    improves = improves or (lambda new, old: new < old)
    fx = objective(X) if current_value is None else current_value
    Y = clamp(Y, lb, ub)
    # Z is drawn up front so the RNG stream does not depend on whether Y is accepted
    S = rng.random(len(X))
    Z = clamp(Y + S * levy_flight(len(X), rng), lb, ub)
    fy = objective(Y)
    evaluations = [(Y, fy)]
    if improves(fy, fx):
        return Y, fy, evaluations
    fz = objective(Z)
    evaluations.append((Z, fz))
    if improves(fz, fx):
        return Z, fz, evaluations
    return X, fx, evaluations


@dataclass
class HhoResult:
    best: Hawk
    trace: list[float]
    strategy_counts: Counter = field(default_factory=Counter)
    evaluations: int = 0


def optimize(objective: Callable[[np.ndarray], float], config: HhoConfig) -> HhoResult:
    """Minimize ``objective`` over the box with Harris hawks optimization.

    Each iteration scores the flock, updates the rabbit (best point ever
    evaluated, dives included), then moves every hawk in index order. No move
    follows the final evaluation, so ``max_iterations=1`` only scores the
    initial flock.
    """
    rng = np.random.default_rng(config.seed)
    lb, ub = config.lower_bounds, config.upper_bounds
    N, T, D = config.population_size, config.max_iterations, config.dimension
    X = lb + rng.random((N, D)) * (ub - lb)
    rabbit_pos, rabbit_val = None, math.inf
    pending: list[tuple[np.ndarray, float]] = []
    counts: Counter = Counter()
    trace: list[float] = []
    n_eval = 0

    for t in range(T):
        fitness = np.array([float(objective(x)) for x in X])
        n_eval += N
        for pos, val in pending + list(zip(X, fitness)):
            if val < rabbit_val:
                rabbit_pos, rabbit_val = np.array(pos, dtype=float), float(val)
        pending = []
        trace.append(rabbit_val)
        if t == T - 1:
            break

        for i in range(N):
            state = EscapeState.draw(t, T, rng)
            kind = state.strategy()
            counts[kind] += 1
            if kind == "exploration":
                j = int(rng.integers(N))
                X[i] = exploration_step(X[i], X[j], rabbit_pos, mean_position(X), lb, ub, rng)
            elif kind == "soft_besiege":
                X[i] = soft_besiege(X[i], rabbit_pos, state.E, state.J, lb, ub)
            elif kind == "hard_besiege":
                X[i] = hard_besiege(X[i], rabbit_pos, state.E, lb, ub)
            else:
                if kind == "soft_besiege_dives":
                    pos, _, evals = soft_besiege_dives(
                        X[i], rabbit_pos, state.E, state.J, rng, objective, lb, ub, fitness[i]
                    )
                else:
                    pos, _, evals = hard_besiege_dives(
                        X[i], rabbit_pos, mean_position(X), state.E, state.J, rng, objective, lb, ub, fitness[i]
                    )
                X[i] = pos
                pending.extend(evals)
                n_eval += len(evals)

    return HhoResult(
        best=Hawk(rabbit_pos, np.array([rabbit_val])),
        trace=trace,
        strategy_counts=counts,
        evaluations=n_eval,
    )
