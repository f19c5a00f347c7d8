"""Differential evolution operators: donor strategies, binomial crossover, greedy selection."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class DeStrategy(str, Enum):
    RAND1 = "rand1"
    RAND2 = "rand2"
    BEST1 = "best1"
    BEST2 = "best2"
    CURRENT_TO_BEST = "current_to_best"


# distinct parent indices drawn per strategy (all != target)
_N_INDICES = {
    DeStrategy.RAND1: 3,
    DeStrategy.RAND2: 5,
    DeStrategy.BEST1: 2,
    DeStrategy.BEST2: 4,
    DeStrategy.CURRENT_TO_BEST: 3,
}

_MIN_POPULATION = {
    DeStrategy.RAND1: 4,
    DeStrategy.RAND2: 6,
    DeStrategy.BEST1: 4,
    DeStrategy.BEST2: 6,
    DeStrategy.CURRENT_TO_BEST: 4,
}


@dataclass(frozen=True)
class DeParams:
    strategy: DeStrategy = DeStrategy.RAND1
    f_scale: float = 0.8
    cr: float = 0.9

    def validate(self) -> list[str]:
        problems = []
        if not 0.0 <= self.f_scale <= 2.0:
            problems.append(f"F must be in [0,2], got {self.f_scale}")
        if not 0.0 < self.cr <= 1.0:
            problems.append(f"CR must be in (0,1], got {self.cr}")
        return problems


def min_population(strategy: DeStrategy) -> int:
    return _MIN_POPULATION[strategy]


def draw_distinct_indices(
    rng: np.random.Generator, population_size: int, count: int, exclude: int
) -> list[int]:
    """Rejection-sample `count` pairwise-distinct indices, none equal to `exclude`."""
    if population_size <= count:
        raise ValueError(
            f"population of {population_size} cannot supply {count} distinct indices != {exclude}"
        )
    chosen: list[int] = []
    while len(chosen) < count:
        r = int(rng.integers(0, population_size))
        if r != exclude and r not in chosen:
            chosen.append(r)
    return chosen


def donor(
    strategy: DeStrategy,
    population: list[np.ndarray],
    i: int,
    global_best: np.ndarray,
    f_scale: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Build the donor vector from scaled difference vectors of distinct parents."""
    np_size = len(population)
    if np_size < min_population(strategy):
        raise ValueError(
            f"strategy {strategy.value} needs a population of at least "
            f"{min_population(strategy)}, got {np_size}"
        )
    idx = draw_distinct_indices(rng, np_size, _N_INDICES[strategy], i)
    f = f_scale
    if strategy is DeStrategy.RAND1:
        r1, r2, r3 = idx
        return population[r1] + f * (population[r2] - population[r3])
    if strategy is DeStrategy.RAND2:
        r1, r2, r3, r4, r5 = idx
        return (
            population[r1]
            + f * (population[r2] - population[r3])
            + f * (population[r4] - population[r5])
        )
    if strategy is DeStrategy.BEST1:
        r1, r2 = idx
        return global_best + f * (population[r1] - population[r2])
    if strategy is DeStrategy.BEST2:
        r1, r2, r3, r4 = idx
        return (
            global_best
            + f * (population[r1] - population[r2])
            + f * (population[r3] - population[r4])
        )
    if strategy is DeStrategy.CURRENT_TO_BEST:
        r1, r2, r3 = idx
        return (
            population[i]
            + f * (global_best - population[r1])
            + f * (population[r2] - population[r3])
        )
    raise ValueError(f"unknown strategy {strategy!r}")  # pragma: no cover - closed enum


def binomial_crossover(
    target: np.ndarray, donor_vec: np.ndarray, cr: float, rng: np.random.Generator
) -> np.ndarray:
    """Trial vector: each component comes from the donor when rand(0,1) <= cr.

    The uniform draw is half-open in [0,1) with inclusive comparison, so cr=1
    inherits every component. There is no forced-inheritance index.
    """
    if target.shape != donor_vec.shape:
        raise ValueError(f"target shape {target.shape} != donor shape {donor_vec.shape}")
    mask = rng.random(target.shape[0]) <= cr
    return np.where(mask, donor_vec, target)


def de_select(
    target: np.ndarray, trial: np.ndarray, target_fitness: float, trial_fitness: float
):
    """Greedy survivor selection: the trial replaces the target only on strict
    improvement; ties keep the target. Returns (survivor, replaced)."""
    if trial_fitness > target_fitness:
        return trial, True
    return target, False
