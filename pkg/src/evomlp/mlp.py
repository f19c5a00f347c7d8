"""Network topology, flat genome encoding, activations, and the feed-forward pass."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Activation(str, Enum):
    TANH = "tanh"
    LOGISTIC = "logistic"
    LINEAR = "linear"


@dataclass(frozen=True)
class Topology:
    """Layer sizes plus the activation applied at every layer.

    ``input_dim`` is the feature count, ``output_dim`` the class count;
    a candidate network is fully described by a Topology and a flat
    weight vector of length ``genome_length(topology)``.
    """

    input_dim: int
    hidden_layers: tuple[int, ...]
    output_dim: int
    activation: Activation = Activation.TANH

    def __post_init__(self):
        object.__setattr__(self, "hidden_layers", tuple(int(h) for h in self.hidden_layers))
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")
        if self.output_dim < 2:
            raise ValueError(f"output_dim must be >= 2, got {self.output_dim}")
        for h in self.hidden_layers:
            if h < 1:
                raise ValueError(f"hidden layer sizes must be >= 1, got {h}")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.input_dim, *self.hidden_layers, self.output_dim)


def genome_length(topology: Topology) -> int:
    """Number of weights and biases: sum of n_out * (n_in + 1) over layer pairs."""
    sizes = topology.layer_sizes
    return sum(n_out * (n_in + 1) for n_in, n_out in zip(sizes[:-1], sizes[1:]))


def unflatten(topology: Topology, genome: np.ndarray) -> list[np.ndarray]:
    """Split a flat genome into per-layer matrices of shape (n_out, n_in + 1).

    Row j of a layer matrix holds node j's incoming weights followed by its
    bias. The layout is canonical so that model files and generated code are
    portable. Returned arrays are views into ``genome``.
    """
    genome = np.asarray(genome, dtype=np.float64)
    expected = genome_length(topology)
    if genome.shape != (expected,):
        raise ValueError(
            f"genome length {genome.shape} does not match topology (expected ({expected},))"
        )
    sizes = topology.layer_sizes
    matrices = []
    offset = 0
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        count = n_out * (n_in + 1)
        matrices.append(genome[offset : offset + count].reshape(n_out, n_in + 1))
        offset += count
    return matrices


def flatten(matrices: list[np.ndarray]) -> np.ndarray:
    """Inverse of :func:`unflatten`; concatenates layer matrices row-major."""
    return np.concatenate([m.reshape(-1) for m in matrices])


def activation_apply(kind: Activation, x):
    """Apply the activation elementwise; accepts scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    if kind is Activation.TANH:
        out = np.tanh(x)
    elif kind is Activation.LOGISTIC:
        # computed branch-wise to avoid exp overflow for large |x|
        out = np.empty_like(x)
        pos = x >= 0
        out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
        ex = np.exp(x[~pos])
        out[~pos] = ex / (1.0 + ex)
    elif kind is Activation.LINEAR:
        out = x.copy()
    else:  # pragma: no cover - closed enum
        raise ValueError(f"unknown activation {kind!r}")
    if out.ndim == 0:
        return float(out)
    return out


def forward(topology: Topology, genome: np.ndarray, features) -> np.ndarray:
    """Feed one feature vector through the network; returns the C output values.

    The activation is applied at every layer including the output layer.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.shape != (topology.input_dim,):
        raise ValueError(
            f"feature vector has shape {x.shape}, expected ({topology.input_dim},)"
        )
    a = x
    for mat in unflatten(topology, genome):
        a = activation_apply(topology.activation, mat[:, :-1] @ a + mat[:, -1])
    return a


def forward_batch(topology: Topology, genome: np.ndarray, features: np.ndarray) -> np.ndarray:
    """Feed an (N, D) feature matrix through the network; returns (N, C) scores."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != topology.input_dim:
        raise ValueError(
            f"feature matrix has shape {x.shape}, expected (N, {topology.input_dim})"
        )
    a = x
    for mat in unflatten(topology, genome):
        a = activation_apply(topology.activation, a @ mat[:, :-1].T + mat[:, -1])
    return a


def predict(topology: Topology, genome: np.ndarray, features) -> int:
    """Class index with the highest output; ties go to the lowest index."""
    return int(np.argmax(forward(topology, genome, features)))


def predict_batch(topology: Topology, genome: np.ndarray, features: np.ndarray) -> np.ndarray:
    """Vectorized :func:`predict` over an (N, D) feature matrix."""
    return np.argmax(forward_batch(topology, genome, features), axis=1)
