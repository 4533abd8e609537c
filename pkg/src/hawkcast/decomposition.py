"""Empirical mode decomposition family: EMD, EEMD, CEEMD, CEEMDAN and ICEEMDAN.

Every decomposer returns a :class:`ModeSet` whose modes (highest frequency
first) plus residual sum back to the input. Noise for realization ``i`` is
drawn from ``numpy.random.default_rng([seed, i])`` so results do not depend on
evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import LengthMismatch, MonotonicSignal

__all__ = [
    "TimeSeries",
    "ModeSet",
    "EnsembleConfig",
    "sift_imf",
    "emd",
    "eemd",
    "ceemd",
    "ceemdan",
    "iceemdan",
    "reconstruct",
    "DECOMPOSERS",
    "decompose",
]


def _frozen(values, ndim: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """An ordered real-valued series with optional calendar timestamps."""

    values: np.ndarray
    timestamps: tuple[date, ...] | tuple[str, ...] | None = None

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1:
            raise ValueError("TimeSeries values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("TimeSeries values must be finite")
        object.__setattr__(self, "values", values)
        if self.timestamps is not None:
            stamps = tuple(self.timestamps)
            if len(stamps) != len(values):
                raise LengthMismatch("timestamps and values differ in length")
            if any(a >= b for a, b in zip(stamps, stamps[1:])):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", stamps)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ModeSet:
    """Ordered intrinsic mode functions plus the final residual."""

    modes: np.ndarray
    residual: np.ndarray

    def __post_init__(self):
        residual = _frozen(self.residual)
        if any(len(m) != len(residual) for m in self.modes):
            raise LengthMismatch("every mode must have the residual's length")
        modes = np.array(self.modes, dtype=float)
        if modes.size == 0:
            modes = np.zeros((0, len(residual)))
        modes = _frozen(modes, ndim=2)
        if modes.shape[1] != len(residual):
            raise LengthMismatch(
                f"modes have length {modes.shape[1]} but residual has {len(residual)}"
            )
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "residual", residual)

    @property
    def source_length(self) -> int:
        return len(self.residual)

    @property
    def n_modes(self) -> int:
        return self.modes.shape[0]

    def components(self) -> np.ndarray:
        """Modes followed by the residual as one ``(n_modes + 1, n)`` array."""
        return np.vstack([self.modes, self.residual[None, :]])


@dataclass(frozen=True)
class EnsembleConfig:
    realizations: int = 100
    noise_amplitude: float = 0.2
    max_sift_iterations: int = 100
    sift_stop_threshold: float = 0.2
    max_modes: int | None = None
    seed: int = 0

    def __post_init__(self):
        if int(self.realizations) < 1:
            raise ValueError("realizations must be >= 1")
        if not 0.0 < self.noise_amplitude < 1.0:
            raise ValueError("noise_amplitude must lie in (0, 1)")
        if int(self.max_sift_iterations) < 1:
            raise ValueError("max_sift_iterations must be >= 1")
        if not self.sift_stop_threshold > 0.0:
            raise ValueError("sift_stop_threshold must be positive")
        if self.max_modes is not None and int(self.max_modes) < 1:
            raise ValueError("max_modes must be >= 1 when given")
        if int(self.seed) < 0:
            raise ValueError("seed must be non-negative")


def _as_signal(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal must be finite")
    return x


def _extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Interior local maxima and minima; a plateau counts once, at its first sample."""
    s = np.sign(np.diff(x))
    nz = np.flatnonzero(s)
    if nz.size == 0:
        empty = np.zeros(0, dtype=int)
        return empty, empty
    # back-fill zero slopes with the next nonzero slope
    fill = np.searchsorted(nz, np.arange(s.size))
    valid = fill < nz.size
    filled = np.zeros_like(s)
    filled[valid] = s[nz[fill[valid]]]
    prev, nxt = filled[:-1], filled[1:]
    maxima = np.flatnonzero((prev > 0) & (nxt < 0)) + 1
    minima = np.flatnonzero((prev < 0) & (nxt > 0)) + 1
    return maxima, minima


def _zero_crossings(x: np.ndarray) -> int:
    s = np.sign(x)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _is_imf(x: np.ndarray) -> bool:
    maxima, minima = _extrema(x)
    return abs(len(maxima) + len(minima) - _zero_crossings(x)) <= 1


def _envelope(x: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Natural cubic spline through extrema, two nearest mirrored over each end."""
    n = len(x)
    left = -idx[1::-1]
    right = 2 * (n - 1) - idx[:-3:-1]
    knots = np.concatenate([left, idx, right])
    vals = np.concatenate([x[idx[1::-1]], x[idx], x[idx[:-3:-1]]])
    return CubicSpline(knots, vals, bc_type="natural")(np.arange(n))


def _envelope_mean(x: np.ndarray, maxima: np.ndarray, minima: np.ndarray) -> np.ndarray:
    return 0.5 * (_envelope(x, maxima) + _envelope(x, minima))


def _has_envelopes(maxima: np.ndarray, minima: np.ndarray) -> bool:
    return len(maxima) >= 2 and len(minima) >= 2


def sift_imf(signal: Sequence[float], config: EnsembleConfig | None = None) -> np.ndarray:
    """Extract one intrinsic mode function by repeated envelope-mean removal.

    Sifting stops once the Cauchy criterion
    ``sum((h_prev - h)**2) / sum(h_prev**2) < sift_stop_threshold`` holds and the
    candidate satisfies the extrema/zero-crossing condition, or when the
    iteration budget runs out.

    Raises:
        MonotonicSignal: the signal has fewer than two maxima or two minima.
    """
    config = config or EnsembleConfig()
    h = _as_signal(signal).copy()
    maxima, minima = _extrema(h)
    if not _has_envelopes(maxima, minima):
        raise MonotonicSignal(
            f"signal has {len(maxima)} maxima and {len(minima)} minima; need at least 2 of each"
        )
    for _ in range(config.max_sift_iterations):
        mean = _envelope_mean(h, maxima, minima)
        denom = float(np.dot(h, h))
        h = h - mean
        sd = float(np.dot(mean, mean)) / denom if denom > 0 else 0.0
        maxima, minima = _extrema(h)
        if not _has_envelopes(maxima, minima):
            break
        if sd < config.sift_stop_threshold and _is_imf(h):
            break
    return h


def emd(signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    """Plain EMD: sift IMFs from successive residuals until the residual is monotonic."""
    config = config or EnsembleConfig()
    x = _as_signal(signal)
    residual = x.copy()
    modes = []
    limit = config.max_modes if config.max_modes is not None else len(x)
    while len(modes) < limit:
        try:
            imf = sift_imf(residual, config)
        except MonotonicSignal:
            break
        modes.append(imf)
        residual = residual - imf
    return ModeSet(np.array(modes).reshape(len(modes), len(x)), residual)


def _noise(n: int, seed: int, index: int) -> np.ndarray:
    return np.random.default_rng([seed, index]).standard_normal(n)


def _stack_padded(mode_sets: list[ModeSet]) -> tuple[np.ndarray, np.ndarray]:
    """Average modes across realizations, zero-padding short decompositions."""
    n = mode_sets[0].source_length
    depth = max(ms.n_modes for ms in mode_sets)
    total = np.zeros((depth, n))
    residual = np.zeros(n)
    for ms in mode_sets:
        total[: ms.n_modes] += ms.modes
        residual += ms.residual
    count = len(mode_sets)
    return total / count, residual / count


def eemd(signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    """Ensemble EMD: average the EMDs of ``realizations`` white-noise perturbed copies."""
    config = config or EnsembleConfig()
    x = _as_signal(signal)
    scale = config.noise_amplitude * np.std(x)
    if scale == 0.0:
        return emd(x, config)
    runs = [
        emd(x + scale * _noise(len(x), config.seed, i), config)
        for i in range(config.realizations)
    ]
    modes, residual = _stack_padded(runs)
    return ModeSet(modes, residual)


def ceemd(signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    """Complementary ensemble EMD: each noise realization is added with both signs."""
    config = config or EnsembleConfig()
    x = _as_signal(signal)
    scale = config.noise_amplitude * np.std(x)
    if scale == 0.0:
        return emd(x, config)
    runs = []
    for i in range(config.realizations):
        w = scale * _noise(len(x), config.seed, i)
        runs.append(emd(x + w, config))
        runs.append(emd(x - w, config))
    modes, residual = _stack_padded(runs)
    return ModeSet(modes, residual)


def _first_imf(x: np.ndarray, config: EnsembleConfig) -> np.ndarray:
    try:
        return sift_imf(x, config)
    except MonotonicSignal:
        return np.zeros_like(x)


def _local_mean(x: np.ndarray, config: EnsembleConfig) -> np.ndarray:
    return x - _first_imf(x, config)


def _noise_modes(n: int, config: EnsembleConfig) -> list[np.ndarray]:
    return [emd(_noise(n, config.seed, i), config).modes for i in range(config.realizations)]


def _noise_mode(noise_modes: np.ndarray, k: int, n: int) -> np.ndarray:
    """k-th (1-based) EMD mode of one noise realization, zeros past its last mode."""
    if k <= noise_modes.shape[0]:
        return noise_modes[k - 1]
    return np.zeros(n)


def _can_continue(r: np.ndarray, produced: int, config: EnsembleConfig) -> bool:
    if config.max_modes is not None and produced >= config.max_modes:
        return False
    return _has_envelopes(*_extrema(r))


def ceemdan(signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    """Complete ensemble EMD with adaptive noise.

    Stage 1 averages the first IMF of ``x + a*std(x)*w_i``; stage ``k > 1``
    averages the first IMF of ``r_{k-1} + a*std(r_{k-1})*E_{k-1}(w_i)`` where
    ``E_j`` is the j-th EMD mode of the noise. The residual is updated by
    subtraction, so reconstruction is exact to rounding.
    """
    config = config or EnsembleConfig()
    x = _as_signal(signal)
    n = len(x)
    if np.std(x) == 0.0 or not _can_continue(x, 0, config):
        return ModeSet(np.zeros((0, n)), x.copy())
    a = config.noise_amplitude
    noises = [_noise(n, config.seed, i) for i in range(config.realizations)]
    noise_modes = _noise_modes(n, config)
    modes = []
    r = x.copy()
    while _can_continue(r, len(modes), config):
        k = len(modes) + 1
        beta = a * np.std(r)
        acc = np.zeros(n)
        for i in range(config.realizations):
            w = noises[i] if k == 1 else _noise_mode(noise_modes[i], k - 1, n)
            acc += _first_imf(r + beta * w, config)
        mode = acc / config.realizations
        modes.append(mode)
        r = r - mode
    return ModeSet(np.array(modes), r)


def iceemdan(signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    """Improved CEEMDAN built on local means of noise-perturbed residuals.

    ``r_k = mean_i M(r_{k-1} + beta_{k-1} * E_k(w_i))`` and
    ``mode_k = r_{k-1} - r_k`` with ``r_0 = x``. ``M(y) = y - first_imf(y)``,
    ``beta_0 = a*std(x)/std(E_1(w_i))`` and ``beta_k = a*std(r_k)`` afterwards.
    """
    config = config or EnsembleConfig()
    x = _as_signal(signal)
    n = len(x)
    if np.std(x) == 0.0 or not _can_continue(x, 0, config):
        return ModeSet(np.zeros((0, n)), x.copy())
    a = config.noise_amplitude
    noise_modes = _noise_modes(n, config)
    modes = []
    r = x.copy()
    while _can_continue(r, len(modes), config):
        k = len(modes) + 1
        acc = np.zeros(n)
        for i in range(config.realizations):
            e = _noise_mode(noise_modes[i], k, n)
            if k == 1:
                spread = np.std(e)
                beta = a * np.std(x) / spread if spread > 0 else 0.0
            else:
                beta = a * np.std(r)
            acc += _local_mean(r + beta * e, config)
        r_next = acc / config.realizations
        modes.append(r - r_next)
        r = r_next
    return ModeSet(np.array(modes), r)


def reconstruct(modes: ModeSet) -> np.ndarray:
    """Elementwise sum of all modes and the residual."""
    residual = np.asarray(modes.residual, dtype=float)
    stack = np.asarray(modes.modes, dtype=float)
    if stack.ndim != 2 or (stack.size and stack.shape[1] != len(residual)):
        raise LengthMismatch("every mode must match the residual length")
    return stack.sum(axis=0) + residual if stack.size else residual.copy()


DECOMPOSERS = {
    "emd": emd,
    "eemd": eemd,
    "ceemd": ceemd,
    "ceemdan": ceemdan,
    "iceemdan": iceemdan,
}


def decompose(method: str, signal: Sequence[float], config: EnsembleConfig | None = None) -> ModeSet:
    try:
        fn = DECOMPOSERS[method]
    except KeyError:
        raise ValueError(f"unknown decomposer {method!r}; choose from {sorted(DECOMPOSERS)}") from None
    return fn(signal, config)
