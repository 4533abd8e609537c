"""Extreme learning machine regression.

Hidden weights and biases are fixed (drawn at random or supplied by an
optimizer); output weights are the minimum-norm least-squares solution
``beta = pinv(H) @ T``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateData, DimensionMismatch, LengthMismatch, Untrained

PINV_RCOND = 1e-10


def sigmoid(z):
    # split by sign so exp never overflows
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


ACTIVATIONS = {
    "sigmoid": sigmoid,
    "tanh": np.tanh,
    "linear": lambda z: np.asarray(z, dtype=float),
}


@dataclass(frozen=True)
class SupervisedSet:
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.inputs, dtype=float))
        Y = np.asarray(self.targets, dtype=float)
        if Y.ndim == 1:
            Y = Y[:, None]
        if len(X) != len(Y):
            raise LengthMismatch(f"{len(X)} input rows but {len(Y)} target rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
            raise ValueError("supervised data must be finite")
        object.__setattr__(self, "inputs", X)
        object.__setattr__(self, "targets", Y)

    def __len__(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class ElmModel:
    input_weights: np.ndarray  # L x n
    biases: np.ndarray  # L
    output_weights: np.ndarray | None = None  # L x m
    activation: str = "sigmoid"

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.input_weights, dtype=float))
        b = np.asarray(self.biases, dtype=float).ravel()
        if len(b) != W.shape[0]:
            raise DimensionMismatch(f"{W.shape[0]} hidden neurons but {len(b)} biases")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        object.__setattr__(self, "input_weights", W)
        object.__setattr__(self, "biases", b)
        if self.output_weights is not None:
            beta = np.asarray(self.output_weights, dtype=float)
            if beta.ndim == 1:
                beta = beta[:, None]
            if beta.shape[0] != W.shape[0]:
                raise DimensionMismatch("output weights must have one row per hidden neuron")
            object.__setattr__(self, "output_weights", beta)

    @property
    def hidden_size(self) -> int:
        return self.input_weights.shape[0]

    @property
    def input_size(self) -> int:
        return self.input_weights.shape[1]

    @property
    def trained(self) -> bool:
        return self.output_weights is not None

    @classmethod
    def random(cls, hidden: int, inputs: int, rng: np.random.Generator, low=-1.0, high=1.0, **kw) -> "ElmModel":
        W = rng.uniform(low, high, size=(hidden, inputs))
        b = rng.uniform(low, high, size=hidden)
        return cls(W, b, **kw)


def hidden_matrix(model: ElmModel, inputs) -> np.ndarray:
    """``H[t, j] = f(w_j . x_t + b_j)``."""
    X = np.atleast_2d(np.asarray(inputs, dtype=float))
    if X.shape[1] != model.input_size:
        raise DimensionMismatch(f"model expects {model.input_size} inputs, got {X.shape[1]}")
    return ACTIVATIONS[model.activation](X @ model.input_weights.T + model.biases)


def pseudoinverse(H, rcond: float = PINV_RCOND) -> np.ndarray:
    """Moore-Penrose inverse via SVD; singular values below ``rcond * s_max`` are dropped."""
    H = np.asarray(H, dtype=float)
    U, s, Vt = np.linalg.svd(H, full_matrices=False)
    if s.size == 0:
        return np.zeros(H.T.shape)
    keep = s > rcond * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (Vt.T * inv) @ U.T


def train(model: ElmModel, data: SupervisedSet) -> tuple[ElmModel, float]:
    """Solve the output weights; returns the trained model and ``||H beta - T||``."""
    if len(data) == 0:
        raise DegenerateData("cannot train on zero observations")
    H = hidden_matrix(model, data.inputs)
    beta = pseudoinverse(H) @ data.targets
    residual = float(np.linalg.norm(H @ beta - data.targets))
    return replace(model, output_weights=beta), residual


def predict(model: ElmModel, inputs) -> np.ndarray:
    if not model.trained:
        raise Untrained("train the model before predicting")
    return hidden_matrix(model, inputs) @ model.output_weights


def encode_parameters(model: ElmModel) -> np.ndarray:
    """Flatten to ``[W row-major, b]`` (length ``L*n + L``)."""
    return np.concatenate([model.input_weights.ravel(), model.biases])


def decode_parameters(vector, hidden: int, inputs: int) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(vector, dtype=float).ravel()
    expected = hidden * inputs + hidden
    if len(v) != expected:
        raise LengthMismatch(f"expected {expected} parameters for L={hidden}, n={inputs}; got {len(v)}")
    return v[: hidden * inputs].reshape(hidden, inputs).copy(), v[hidden * inputs :].copy()


def save_model(model: ElmModel, path: str | Path) -> None:
    """Write the plain-text format: header ``ELM L n m activation``, then W, b and beta rows."""
    if not model.trained:
        raise Untrained("only trained models can be saved")
    L, n = model.input_weights.shape
    m = model.output_weights.shape[1]
    lines = [f"ELM {L} {n} {m} {model.activation}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in model.input_weights]
    lines.append(" ".join(repr(float(v)) for v in model.biases))
    lines += [" ".join(repr(float(v)) for v in row) for row in model.output_weights]
    Path(path).write_text("\n".join(lines) + "\n")


def load_model(path: str | Path) -> ElmModel:
    lines = Path(path).read_text().splitlines()
    head = lines[0].split()
    if len(head) != 5 or head[0] != "ELM":
        raise ValueError(f"{path}: not an ELM model file")
    L, n, m = (int(v) for v in head[1:4])
    rows = [[float(v) for v in line.split()] for line in lines[1:] if line.strip()]
    if len(rows) != 2 * L + 1:
        raise ValueError(f"{path}: expected {2 * L + 1} data rows, found {len(rows)}")
    W = np.array(rows[:L])
    b = np.array(rows[L])
    beta = np.array(rows[L + 1 :])
    if W.shape != (L, n) or beta.shape != (L, m):
        raise ValueError(f"{path}: matrix shapes do not match header")
    return ElmModel(W, b, beta, head[4])
