"""Multi-objective Harris hawks optimization (MOHHO).

The flock moves exactly as in :mod:`hawkcast.hho`. Two things change: the
rabbit each hawk chases is drawn from a bounded Pareto archive by roulette
wheel (sparse hypergrid cells preferred), and greedy dive acceptance uses
Pareto dominance. When the archive overflows, members are evicted with
probability proportional to the crowding of their cell.

All objectives are minimized.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import hho
from .errors import DimensionMismatch, EmptyArchive
from .hho import EscapeState, Hawk, HhoConfig


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare objective vectors of shapes {a.shape} and {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def dominance_matrix(A, B) -> np.ndarray:
    """``out[i, j]`` is True when row ``A[i]`` dominates row ``B[j]``."""
    A = np.asarray(A, dtype=float)[:, None, :]
    B = np.asarray(B, dtype=float)[None, :, :]
    return np.all(A <= B, axis=2) & np.any(A < B, axis=2)


def non_dominated_mask(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    if len(P) == 0:
        return np.zeros(0, dtype=bool)
    return ~dominance_matrix(P, P).any(axis=0)


def non_dominated_filter(points) -> np.ndarray:
    """Rows of ``points`` not dominated by any other row, in their original order."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or len(P) == 0:
        raise ValueError("non_dominated_filter needs a nonempty 2-D array of objective vectors")
    return P[non_dominated_mask(P)]


@dataclass
class ParetoArchive:
    """Bounded store of mutually non-dominated solutions with a hypergrid.

    ``grid_occupancy`` maps a cell (tuple of per-objective indices) to the
    number of members in it; ``cells[i]`` is member ``i``'s cell.
    """

    capacity: int = 100
    grid_divisions: int = 10
    inflation: float = 0.1
    positions: np.ndarray = field(default=None)
    objectives: np.ndarray = field(default=None)
    cells: list = field(default_factory=list)
    grid_occupancy: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")
        if self.grid_divisions < 1:
            raise ValueError("grid_divisions must be >= 1")
        if self.positions is None:
            self.positions = np.zeros((0, 0))
        if self.objectives is None:
            self.objectives = np.zeros((0, 0))
        self.rebuild_grid()

    def __len__(self) -> int:
        return len(self.objectives)

    @property
    def entries(self) -> list[Hawk]:
        return [Hawk(p.copy(), o.copy()) for p, o in zip(self.positions, self.objectives)]

    def copy(self) -> "ParetoArchive":
        return ParetoArchive(
            capacity=self.capacity,
            grid_divisions=self.grid_divisions,
            inflation=self.inflation,
            positions=self.positions.copy(),
            objectives=self.objectives.copy(),
        )

    def rebuild_grid(self) -> None:
        self.cells = grid_cells(self.objectives, self.grid_divisions, self.inflation)
        self.grid_occupancy = dict(Counter(self.cells))

    def occupancy(self) -> np.ndarray:
        """Per-member count of archive members sharing its cell."""
        return np.array([self.grid_occupancy[c] for c in self.cells], dtype=float)


def grid_cells(objectives, divisions: int, inflation: float) -> list[tuple[int, ...]]:
    F = np.asarray(objectives, dtype=float)
    if len(F) == 0:
        return []
    lo, hi = F.min(axis=0), F.max(axis=0)
    span = hi - lo
    pad = np.where(span > 0, inflation * span, inflation * np.maximum(np.abs(lo), 1.0))
    lo, hi = lo - pad, hi + pad
    idx = np.floor((F - lo) / (hi - lo) * divisions).astype(int)
    idx = np.clip(idx, 0, divisions - 1)
    return [tuple(row) for row in idx]


def removal_weight(occupancy: float, c: float = 2.0) -> float:
    """Unnormalized eviction weight ``N_i / c`` of a member whose cell holds ``N_i`` members."""
    return occupancy / c


def selection_weight(occupancy: float, c: float = 2.0) -> float:
    """Unnormalized leader weight ``c / N_i``."""
    return c / occupancy


def archive_update(
    archive: ParetoArchive,
    positions,
    objectives,
    rng: np.random.Generator,
    c: float = 2.0,
) -> ParetoArchive:
    """Merge candidate solutions into ``archive`` in place and return it.

    Candidates dominated by a member (or by another candidate) are dropped, as
    are exact objective duplicates of members. Members dominated by an
    accepted candidate are evicted. Overflow is trimmed by roulette on
    ``N_i / c`` using the grid of the merged set.
    """
    P = np.atleast_2d(np.asarray(positions, dtype=float))
    F = np.atleast_2d(np.asarray(objectives, dtype=float))
    if len(F) == 0:
        return archive
    finite = np.all(np.isfinite(F), axis=1)
    P, F = P[finite], F[finite]
    keep = non_dominated_mask(F)
    P, F = P[keep], F[keep]
    # identical candidates: keep the first occurrence only
    _, first = np.unique(F, axis=0, return_index=True)
    first = np.sort(first)
    P, F = P[first], F[first]

    if len(archive):
        A = archive.objectives
        beaten = dominance_matrix(A, F).any(axis=0)
        duplicate = np.all(A[:, None, :] == F[None, :, :], axis=2).any(axis=0)
        accept = ~beaten & ~duplicate
        P, F = P[accept], F[accept]
        survivors = ~dominance_matrix(F, A).any(axis=0) if len(F) else np.ones(len(A), dtype=bool)
        P = np.vstack([archive.positions[survivors], P])
        F = np.vstack([A[survivors], F])

    if len(F) > archive.capacity:
        cells = grid_cells(F, archive.grid_divisions, archive.inflation)
        counts = Counter(cells)
        alive = np.ones(len(F), dtype=bool)
        while alive.sum() > archive.capacity:
            live = np.flatnonzero(alive)
            w = np.array([removal_weight(counts[cells[i]], c) for i in live])
            victim = live[rng.choice(len(live), p=w / w.sum())]
            alive[victim] = False
            counts[cells[victim]] -= 1
        P, F = P[alive], F[alive]

    archive.positions = P
    archive.objectives = F
    archive.rebuild_grid()
    return archive


def leader_select(archive: ParetoArchive, rng: np.random.Generator, c: float = 2.0) -> Hawk:
    """Roulette-wheel draw of one member with weight ``c / N_i``."""
    if len(archive) == 0:
        raise EmptyArchive("cannot select a leader from an empty archive")
    w = np.array([selection_weight(n, c) for n in archive.occupancy()])
    i = int(rng.choice(len(w), p=w / w.sum()))
    return Hawk(archive.positions[i].copy(), archive.objectives[i].copy())


@dataclass(frozen=True)
class MohhoConfig(HhoConfig):
    archive_capacity: int = 100
    grid_divisions: int = 10
    crowding_constant: float = 2.0
    inflation: float = 0.1

    def __post_init__(self):
        super().__post_init__()
        if not self.crowding_constant > 1.0:
            raise ValueError("crowding_constant must exceed 1")
        if self.archive_capacity < 1:
            raise ValueError("archive_capacity must be >= 1")


@dataclass
class MohhoResult:
    archive: ParetoArchive
    snapshots: list[np.ndarray]
    strategy_counts: Counter = field(default_factory=Counter)
    evaluations: int = 0


def mohho_optimize(
    objectives: Callable[[np.ndarray], Sequence[float]],
    config: MohhoConfig,
    keep_snapshots: bool = True,
) -> MohhoResult:
    """Approximate the Pareto front of ``objectives`` over the box.

    ``snapshots[t]`` holds the archive's objective vectors after iteration
    ``t``. Like :func:`hawkcast.hho.optimize`, the flock is scored at the top of
    each iteration and no move follows the last scoring.
    """
    rng = np.random.default_rng(config.seed)
    lb, ub = config.lower_bounds, config.upper_bounds
    N, T, D = config.population_size, config.max_iterations, config.dimension
    c = config.crowding_constant
    archive = ParetoArchive(
        capacity=config.archive_capacity,
        grid_divisions=config.grid_divisions,
        inflation=config.inflation,
    )

    def evaluate(x):
        return np.asarray(objectives(x), dtype=float)

    X = lb + rng.random((N, D)) * (ub - lb)
    pending_pos: list[np.ndarray] = []
    pending_obj: list[np.ndarray] = []
    snapshots: list[np.ndarray] = []
    counts: Counter = Counter()
    n_eval = 0

    for t in range(T):
        F = np.array([evaluate(x) for x in X])
        n_eval += N
        cand_pos = np.vstack([X] + [p[None, :] for p in pending_pos])
        cand_obj = np.vstack([F] + [f[None, :] for f in pending_obj])
        archive_update(archive, cand_pos, cand_obj, rng, c)
        pending_pos, pending_obj = [], []
        if keep_snapshots:
            snapshots.append(archive.objectives.copy())
        if t == T - 1:
            break

        for i in range(N):
            state = EscapeState.draw(t, T, rng)
            kind = state.strategy()
            counts[kind] += 1
            rabbit = leader_select(archive, rng, c).position
            if kind == "exploration":
                j = int(rng.integers(N))
                X[i] = hho.exploration_step(X[i], X[j], rabbit, hho.mean_position(X), lb, ub, rng)
            elif kind == "soft_besiege":
                X[i] = hho.soft_besiege(X[i], rabbit, state.E, state.J, lb, ub)
            elif kind == "hard_besiege":
                X[i] = hho.hard_besiege(X[i], rabbit, state.E, lb, ub)
            else:
                if kind == "soft_besiege_dives":
                    pos, _, evals = hho.soft_besiege_dives(
                        X[i], rabbit, state.E, state.J, rng, evaluate, lb, ub, F[i], improves=dominates
                    )
                else:
                    pos, _, evals = hho.hard_besiege_dives(
                        X[i], rabbit, hho.mean_position(X), state.E, state.J, rng, evaluate, lb, ub, F[i],
                        improves=dominates,
                    )
                X[i] = pos
                for p, f in evals:
                    pending_pos.append(np.asarray(p, dtype=float))
                    pending_obj.append(f)
                n_eval += len(evals)

    return MohhoResult(archive=archive, snapshots=snapshots, strategy_counts=counts, evaluations=n_eval)
