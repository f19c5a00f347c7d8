"""Per-generation population snapshots projected onto a fixed 2-D PCA basis.

The basis is fitted once, on the first generation's genomes, and reused for
the rest of the run, so trajectories of individual candidates stay comparable
across generations. Events are written as JSON lines that any plotting tool
can consume; nothing is rendered here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PcaBasis:
    mean: np.ndarray  # (G,)
    components: np.ndarray  # (2, G), orthonormal rows
    explained_variance: np.ndarray  # (2,)
    degenerate: bool = False


@dataclass(frozen=True)
class TraceEvent:
    generation: int
    member_index: int
    x: float
    y: float
    fitness: float
    replaced: bool | None = None  # DE/GA
    personal_best_fitness: float | None = None  # PSO

    def to_record(self) -> dict:
        record = {
            "gen": self.generation,
            "idx": self.member_index,
            "x": self.x,
            "y": self.y,
            "fit": self.fitness,
        }
        if self.replaced is not None:
            record["replaced"] = self.replaced
        if self.personal_best_fitness is not None:
            record["pbest"] = self.personal_best_fitness
        return record


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component positive for reproducible output."""
    peak = int(np.argmax(np.abs(vec)))
    return -vec if vec[peak] < 0 else vec


def _orthonormal_fallback(first: np.ndarray, g: int) -> np.ndarray:
    """Deterministic unit vector orthogonal to `first` for rank-deficient data."""
    probe = int(np.argmin(np.abs(first)))
    candidate = np.zeros(g)
    candidate[probe] = 1.0
    candidate -= (candidate @ first) * first
    norm = np.linalg.norm(candidate)
    return _fix_sign(candidate / norm)


def fit_pca(generation0: np.ndarray) -> PcaBasis:
    """Top-2 principal components of the first generation's genome matrix.

    Centers by column mean and eigendecomposes the sample covariance; when the
    genome dimension exceeds the population size the NP x NP Gram matrix is
    decomposed instead. Eigenvector signs follow the
    largest-magnitude-component-positive convention. A zero-variance
    generation falls back to the first two canonical axes, flagged degenerate.
    """
    matrix = np.asarray(generation0, dtype=np.float64)
    n, g = matrix.shape
    if n < 3:
        raise ValueError(f"PCA needs at least 3 members, got {n}")
    if g < 2:
        raise ValueError(f"PCA needs genome length >= 2, got {g}")
    mean = matrix.mean(axis=0)
    centered = matrix - mean

    if not centered.any():
        components = np.zeros((2, g))
        components[0, 0] = 1.0
        components[1, 1] = 1.0
        return PcaBasis(mean, components, np.zeros(2), degenerate=True)

    if g <= n:
        cov = centered.T @ centered / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(cov)
        order = np.argsort(eigvals)[::-1][:2]
        variances = np.maximum(eigvals[order], 0.0)
        components = np.vstack([_fix_sign(eigvecs[:, k]) for k in order])
    else:
        gram = centered @ centered.T / (n - 1)
        eigvals, eigvecs = np.linalg.eigh(gram)
        order = np.argsort(eigvals)[::-1][:2]
        variances = np.maximum(eigvals[order], 0.0)
        rows = []
        cutoff = variances[0] * 1e-12
        for rank, k in enumerate(order):
            if variances[rank] <= cutoff and rank > 0:
                rows.append(_orthonormal_fallback(rows[0], g))
                variances[rank] = 0.0
                continue
            direction = centered.T @ eigvecs[:, k]
            rows.append(_fix_sign(direction / np.linalg.norm(direction)))
        components = np.vstack(rows)

    return PcaBasis(mean, components, variances, degenerate=False)


def project(basis: PcaBasis, genome: np.ndarray) -> tuple[float, float]:
    """Coordinates of one genome in the fitted 2-D basis."""
    genome = np.asarray(genome, dtype=np.float64)
    if genome.shape != basis.mean.shape:
        raise ValueError(f"genome shape {genome.shape} != basis shape {basis.mean.shape}")
    centered = genome - basis.mean
    return float(centered @ basis.components[0]), float(centered @ basis.components[1])


class JsonLinesSink:
    """Writes one JSON object per event; flushed at generation boundaries."""

    def __init__(self, path):
        self._fh = open(path, "w", encoding="utf-8", newline="\n")

    def emit(self, event: TraceEvent) -> None:
        self._fh.write(json.dumps(event.to_record()) + "\n")

    def flush(self) -> None:
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class MemorySink:
    """Collects events in memory; used by the HTTP service and tests."""

    def __init__(self):
        self.events: list[TraceEvent] = []

    def emit(self, event: TraceEvent) -> None:
        self.events.append(event)

    def flush(self) -> None:
        pass

    def close(self) -> None:
        pass
